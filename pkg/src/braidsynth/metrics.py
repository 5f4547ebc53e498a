"""Distance and quality measures for synthesized gates.

One-qubit accuracy is the global-phase-invariant trace distance. Two-qubit
accuracy is measured on local invariants: a braidword's computational block
is compared to the controlled-not local-equivalence class by the squared
deviation of its invariant triple, which ignores any single-qubit pre/post
rotations. Non-unitarity of a block is summarized by the absolute eigenvalue
sum of A†A - I, and leakage by the magnitude of the non-computational entry.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .anyons import Radical
from .backends import Backend, CMatrix, hermitian_eigenvalues, max_abs_diff

UNITARY_TOL = 1e-8


@dataclass(frozen=True)
class LocalInvariants:
    g1: float
    g2: float
    g3: float

    def astuple(self):
        return (self.g1, self.g2, self.g3)


CNOT_INVARIANTS = (0.0, 0.0, 1.0)


@dataclass(frozen=True)
class GateTarget:
    name: str
    matrix: CMatrix


def gate_target(name: str, backend: Backend | None = None) -> GateTarget:
    """Standard targets: H, T (one-qubit) and CNOT (two-qubit)."""
    backend = backend or Backend.native64()
    with backend.ctx():
        if name == "H":
            r = backend.radical(Radical(1, Fraction(1, 2)))
            m = CMatrix(backend, [[r, r], [r, -r]])
        elif name == "T":
            z, o = backend.complex(0), backend.complex(1)
            m = CMatrix(backend, [[o, z], [z, backend.exp_ipi(1, 4)]])
        elif name == "CNOT":
            z, o = backend.complex(0), backend.complex(1)
            m = CMatrix(backend, [[o, z, z, z], [z, o, z, z],
                                  [z, z, z, o], [z, z, o, z]])
        else:
            raise ValueError(f"unknown gate target {name!r}")
    return GateTarget(name, m)


def global_phase_distance(u0: CMatrix, u: CMatrix):
    """sqrt(1 - |tr(u0 u†)| / 2), zero iff equal up to a global phase."""
    if u0.n != 2 or u.n != 2:
        raise ValueError("global_phase_distance requires 2x2 matrices")
    be = u0.backend
    with be.ctx():
        radicand = 1 - be.abs((u0 @ u.dagger()).trace()) / 2
        if radicand < 0:
            radicand = be.complex(0).real
        return be.sqrt(radicand)


def _bell_q(backend: Backend) -> CMatrix:
    s = backend.radical(Radical(1, Fraction(1, 2)))
    with backend.ctx():
        i = backend.complex(0, 1)
        z = backend.complex(0)
        return CMatrix(backend, [
            [s, z, z, i * s],
            [z, i * s, s, z],
            [z, i * s, -s, z],
            [s, z, z, -i * s],
        ])


def bell_transform(u: CMatrix) -> CMatrix:
    """Conjugate a 4x4 matrix into the magic (Bell) basis."""
    if u.n != 4:
        raise ValueError("bell_transform requires a 4x4 matrix")
    q = _bell_q(u.backend)
    with u.backend.ctx():
        return q.dagger() @ u @ q

def local_invariants(u: CMatrix) -> LocalInvariants:
    """Invariant triple (g1, g2, g3) of a 4x4 unitary under local rotations.

    With m = U_B^T U_B in the Bell basis, g1 + i g2 = tr(m)^2 / (16 det U)
    and g3 = (tr(m)^2 - tr(m^2)) / (4 det U); g3 gains a tiny imaginary
    residue from roundoff which is checked and dropped.
    """
    if u.n != 4:
        raise ValueError("local_invariants requires a 4x4 matrix")
    be = u.backend
    with be.ctx():
        err = max_abs_diff(u.dagger() @ u, CMatrix.eye(be, 4))
        if be.to_float(err) > UNITARY_TOL:
            raise ValueError(
                f"matrix deviates from unitarity by {be.to_float(err):.3e}")
        det = u.det4()
        if be.to_float(be.abs(det)) < 1e-8:
            raise ValueError("determinant too small for invariants")
        ub = bell_transform(u)
        m = ub.transpose() @ ub
        tr2 = m.trace() ** 2
        trm2 = (m @ m).trace()
        g12 = tr2 / (16 * det)
        g3c = (tr2 - trm2) / (4 * det)
        g3_scale = 1 + be.to_float(be.abs(g3c))
        if be.to_float(abs(g3c.imag)) > 1e-8 * g3_scale:
            raise ValueError("invariant g3 has a non-real residue")
        return LocalInvariants(g12.real, g12.imag, g3c.real)


def cnot_distance(a: CMatrix):
    """Squared deviation of a block's invariants from the CNOT class."""
    inv = local_invariants(a)
    be = a.backend
    with be.ctx():
        total = be.complex(0).real
        for got, want in zip(inv.astuple(), CNOT_INVARIANTS):
            d = got - want
            total = total + d * d
        return total


def unitarity_defect(a: CMatrix):
    """Sum of absolute eigenvalues of A†A - I (zero iff A unitary)."""
    be = a.backend
    with be.ctx():
        h = a.dagger() @ a - CMatrix.eye(be, a.n)
        total = be.complex(0).real
        for lam in hermitian_eigenvalues(h):
            total = total + abs(lam)
        return total


def leakage_magnitude(m11) -> float:
    """Magnitude of the non-computational diagonal entry."""
    return abs(m11)
