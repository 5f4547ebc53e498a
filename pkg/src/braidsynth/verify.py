"""Independent re-evaluation of a single two-qubit braidword.

Evaluates the word under both multiplication orders (first letter as
leftmost factor, and as rightmost) so a reported result can always be
traced to a stated convention, and reports the CNOT-class distance,
leakage magnitude, unitarity defect of the computational block, and
the off-block coupling norm for each.
"""

from __future__ import annotations

from .backends import Backend
from .ebm import TWO_QUBIT, braidword_unitary, ebm_set, split_blocks
from .metrics import cnot_distance, unitarity_defect
from .words import TWO_QUBIT_CODEC

ORDERS = ("l2r", "r2l")


def _evaluate_order(ebms, word, order: str, backend: Backend) -> dict:
    with backend.ctx():
        u = braidword_unitary(ebms, word, order=order)
        m11, block, off_norm = split_blocks(u)
        out = {
            "m11_abs": backend.to_float(abs(m11)),
            "off_block_norm": backend.to_float(off_norm),
            "unitarity_defect": backend.to_float(unitarity_defect(block)),
        }
        try:
            dist = cnot_distance(block)
        except ValueError as exc:
            out["distance"] = None
            out["error"] = str(exc)
        else:
            out["distance"] = backend.to_float(dist)
            out["distance_str"] = backend.format_real(dist)
    return out


def verify_word(model: str, letters: str,
                backend: Backend | None = None) -> dict:
    """Evaluate a two-qubit word under both orders; report the better one.

    The top-level metrics repeat the winning order's values;
    ``order_convention`` names which order that is, and ``orders`` holds
    the full per-order breakdown.
    """
    backend = backend or Backend.native64()
    word = TWO_QUBIT_CODEC.decode(letters)
    ebms = ebm_set(model, TWO_QUBIT, backend)
    per_order = {order: _evaluate_order(ebms, word, order, backend)
                 for order in ORDERS}

    def rank(order):
        dist = per_order[order]["distance"]
        return float("inf") if dist is None else dist

    chosen = min(ORDERS, key=rank)
    report = {
        "model": model,
        "word": letters,
        "length": len(word),
        "backend": backend.label(),
        "order_convention": chosen,
        "orders": per_order,
    }
    for key in ("distance", "m11_abs", "unitarity_defect", "off_block_norm"):
        report[key] = per_order[chosen][key]
    if "distance_str" in per_order[chosen]:
        report["distance_str"] = per_order[chosen]["distance_str"]
    return report
