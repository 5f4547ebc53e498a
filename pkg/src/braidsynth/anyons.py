"""Anyon labels, fusion rules, qubit-model enumeration, and exact F/R data.

Labels are twice the topological spin: 0..4 stand for 1, X, Y, X', Z.
Angle-valued constants are stored exactly: R symbols as integer exponents k
of e^{i k pi/12}, F-matrix entries as sign * sqrt(p/q).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

LABELS = ("1", "X", "Y", "X'", "Z")
MAX_LABEL = 4

# display name of a model: V{x1}{x2}{x3}_{t}


def fusion_product(a: int, b: int) -> tuple[int, ...]:
    """Allowed total charges of a pair, ascending."""
    if not (0 <= a <= MAX_LABEL and 0 <= b <= MAX_LABEL):
        raise ValueError(f"labels must be in 0..{MAX_LABEL}, got {a}, {b}")
    lo = abs(a - b)
    hi = min(a + b, 2 * MAX_LABEL - a - b)
    return tuple(range(lo, hi + 1, 2))


@dataclass(frozen=True)
class ModelSpec:
    """A three-anyon qubit encoding V{x1 x2 x3}_{t}."""

    name: str
    initial: tuple[int, int, int]
    total_charge: int
    channels: tuple[int, int]  # the two pair channels carrying |0>, |1>, ascending

    @property
    def braidable(self) -> bool:
        """True when every adjacent distinct pair is {X, X'} (Z-pair trick applies)."""
        x1, x2, x3 = self.initial
        for a, b in ((x1, x2), (x2, x3)):
            if a != b and {a, b} != {1, 3}:
                return False
        return True


# ordered leading pairs with a two-channel fusion outcome usable as a qubit
_LEADING_PAIRS = (
    (1, 1), (1, 2), (2, 1), (1, 3), (3, 1), (2, 3), (3, 2), (3, 3),
)


def enumerate_models() -> tuple[ModelSpec, ...]:
    """All three-anyon encodings whose state space is exactly two-dimensional."""
    out = []
    for x1, x2 in _LEADING_PAIRS:
        for x3 in (1, 2, 3):
            for t in range(MAX_LABEL + 1):
                channels = tuple(
                    c for c in fusion_product(x1, x2) if t in fusion_product(c, x3)
                )
                if len(channels) == 2:
                    name = f"V{x1}{x2}{x3}_{t}"
                    out.append(ModelSpec(name, (x1, x2, x3), t, channels))
    return tuple(out)


_MODELS = {m.name: m for m in enumerate_models()}


def model(name: str) -> ModelSpec:
    """Look up a model by its V{x1 x2 x3}_{t} name."""
    try:
        return _MODELS[name]
    except KeyError:
        raise KeyError(f"unknown model {name!r}; see enumerate_models()") from None


def braidable_models() -> tuple[ModelSpec, ...]:
    return tuple(m for m in enumerate_models() if m.braidable)


# the braidable models whose braid images generate useful gates, paired by the
# global phase difference of their one-qubit generators
PHASE_CLASSES = (
    ("V113_3", "V331_1", "sigma1 differs by pi"),
    ("V131_3", "V313_1", "same"),
    ("V311_3", "V133_1", "sigma2 differs by pi"),
)

GATE_MODELS = tuple(n for pair in PHASE_CLASSES for n in pair[:2])

# the three models studied in depth (left column of each phase class, with the
# third class represented by its right member in the deep-dive set)
STUDIED_MODELS = ("V113_3", "V131_3", "V133_1")


# R symbols: (a, b, channel) -> k with R^{ab}_c = e^{i k pi/12}
R_EXPONENTS = {
    (1, 1, 0): 9,
    (1, 1, 2): 1,
    (1, 3, 2): 7,
    (1, 3, 4): 3,
    (3, 1, 2): 7,
    (3, 1, 4): 3,
    (3, 3, 0): -3,
    (3, 3, 2): -11,
}


@dataclass(frozen=True)
class Radical:
    """Exact real number sign * sqrt(p/q)."""

    sign: int
    frac: Fraction

    def __float__(self) -> float:
        return self.sign * float(self.frac) ** 0.5


def _rad(sign: int, p: int, q: int) -> Radical:
    return Radical(sign, Fraction(p, q))


# recoupling matrices for (x1 x2 x3 | t), rows/cols over the two relevant
# channels in ascending order; all are real, symmetric, and involutory
_F_A = (
    (_rad(-1, 2, 3), _rad(1, 1, 3)),
    (_rad(1, 1, 3), _rad(1, 2, 3)),
)
_F_B = (
    (_rad(-1, 1, 3), _rad(1, 2, 3)),
    (_rad(1, 2, 3), _rad(1, 1, 3)),
)

F_RADICALS = {
    (1, 1, 3, 3): _F_A,
    (3, 1, 1, 3): _F_A,
    (1, 3, 3, 1): _F_A,
    (3, 3, 1, 1): _F_A,
    (1, 3, 1, 3): _F_B,
    (3, 1, 3, 1): _F_B,
}

# recoupling data for a middle pair of identical anyons fusing through Y,
# used by the entangling generator of the six-anyon encoding
F_MIX_RADICALS = {
    (3, 3, 2): (
        (_rad(1, 1, 2), _rad(-1, 1, 2)),
        (_rad(-1, 1, 2), _rad(-1, 1, 2)),
    ),
    (1, 1, 2): (
        (_rad(-1, 1, 2), _rad(1, 1, 2)),
        (_rad(1, 1, 2), _rad(1, 1, 2)),
    ),
}


def model_to_dict(m: ModelSpec) -> dict:
    """JSON-ready description of a model."""
    return {
        "name": m.name,
        "initial": list(m.initial),
        "initial_labels": [LABELS[x] for x in m.initial],
        "total_charge": m.total_charge,
        "total_charge_label": LABELS[m.total_charge],
        "channels": list(m.channels),
        "channel_labels": [LABELS[c] for c in m.channels],
        "braidable": m.braidable,
        "gate_model": m.name in GATE_MODELS,
    }
