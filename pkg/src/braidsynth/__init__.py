"""Braidword synthesis for metaplectic-anyon quantum gates.

Enumerates three-anyon qubit encodings, builds their elementary braid
matrices, and searches for braidwords approximating standard gates:
exhaustive scans and a genetic algorithm for the two-qubit CNOT
equivalence class, and a GA-seeded Solovay-Kitaev compiler for
one-qubit gates.
"""

__version__ = "0.1.0"

from .anyons import enumerate_models, fusion_product, model
from .backends import Backend, CMatrix
from .ebm import braidword_unitary, ebm_set
from .words import BraidWord, codec_for

__all__ = [
    "__version__",
    "Backend",
    "BraidWord",
    "CMatrix",
    "braidword_unitary",
    "codec_for",
    "ebm_set",
    "enumerate_models",
    "fusion_product",
    "model",
]
