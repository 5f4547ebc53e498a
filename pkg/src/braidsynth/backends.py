"""Two-tier complex matrix arithmetic: fast machine doubles and arbitrary
precision via mpmath, behind one small immutable matrix type.

The double backend carries numpy complex128 scalars; the big backend carries
mpmath mpc scalars at a configurable bit precision. All matrix operations are
plain loops over tuple-of-tuples storage; dimensions never exceed five, and
every hot search path works on raw numpy arrays elsewhere.
"""

from __future__ import annotations

import cmath
import math
from contextlib import nullcontext
from dataclasses import dataclass
from typing import Iterable

import mpmath as mp
import numpy as np

from .anyons import Radical

DEFAULT_BIG_BITS = 256


@dataclass(frozen=True)
class Backend:
    """Scalar field selector: 'native64' doubles or 'bigfloat' mpmath."""

    kind: str
    precision_bits: int

    @classmethod
    def native64(cls) -> "Backend":
        return cls("native64", 53)

    @classmethod
    def bigfloat(cls, bits: int = DEFAULT_BIG_BITS) -> "Backend":
        if bits < 53:
            raise ValueError("bigfloat precision below double precision")
        return cls("bigfloat", bits)

    @classmethod
    def parse(cls, spec: str) -> "Backend":
        """Parse 'native64' or 'bigfloat[:bits]'."""
        if spec == "native64":
            return cls.native64()
        if spec == "bigfloat":
            return cls.bigfloat()
        if spec.startswith("bigfloat:"):
            return cls.bigfloat(int(spec.split(":", 1)[1]))
        raise ValueError(f"unknown backend {spec!r}")

    @property
    def is_big(self) -> bool:
        return self.kind == "bigfloat"

    def label(self) -> str:
        return "native64" if not self.is_big else f"bigfloat:{self.precision_bits}"

    def ctx(self):
        """Precision context all scalar work must run under."""
        return mp.workprec(self.precision_bits) if self.is_big else nullcontext()

    @property
    def zero_threshold(self) -> float:
        """Magnitude below which a value is reported as numerically zero."""
        return 10.0 ** (-0.2 * self.precision_bits)

    # scalar constructors -------------------------------------------------

    def complex(self, re, im=0):
        with self.ctx():
            if self.is_big:
                return mp.mpc(re, im)
            return np.complex128(complex(re, im))

    def exp_ipi(self, num: int, den: int):
        """e^{i pi num/den} from the exact angle."""
        with self.ctx():
            if self.is_big:
                return mp.exp(1j * mp.pi * mp.mpf(num) / den)
            return np.complex128(cmath.exp(1j * math.pi * num / den))

    def radical(self, r: Radical):
        """sign * sqrt(p/q) at working precision."""
        with self.ctx():
            if self.is_big:
                return mp.mpc(r.sign * mp.sqrt(mp.mpf(r.frac.numerator) / r.frac.denominator))
            return np.complex128(float(r))

    # scalar helpers ------------------------------------------------------

    def sqrt(self, x):
        with self.ctx():
            return mp.sqrt(x) if self.is_big else math.sqrt(x)

    def abs(self, z) -> float:
        with self.ctx():
            return abs(z)

    def real(self, z):
        return z.real

    def hypot2(self, z):
        """|z|^2 without the square root."""
        with self.ctx():
            return z.real * z.real + z.imag * z.imag

    def atan2(self, y, x):
        with self.ctx():
            return mp.atan2(y, x) if self.is_big else math.atan2(y, x)

    def cos(self, x):
        with self.ctx():
            return mp.cos(x) if self.is_big else math.cos(x)

    def sin(self, x):
        with self.ctx():
            return mp.sin(x) if self.is_big else math.sin(x)

    def to_float(self, x) -> float:
        return float(x)

    def format_real(self, x) -> str:
        """Decimal string carrying the backend's full precision."""
        if not self.is_big:
            return repr(float(x))
        with self.ctx():
            return mp.nstr(mp.mpf(x), int(self.precision_bits / 3.32) + 3)


class CMatrix:
    """Immutable square complex matrix bound to a backend."""

    __slots__ = ("backend", "n", "rows")

    def __init__(self, backend: Backend, rows: Iterable[Iterable]):
        rows = tuple(tuple(r) for r in rows)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("matrix must be square")
        object.__setattr__(self, "backend", backend)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "rows", rows)

    def __setattr__(self, *_):
        raise AttributeError("CMatrix is immutable")

    # constructors --------------------------------------------------------

    @classmethod
    def eye(cls, backend: Backend, n: int) -> "CMatrix":
        z, o = backend.complex(0), backend.complex(1)
        return cls(backend, [[o if i == j else z for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, backend: Backend, n: int) -> "CMatrix":
        z = backend.complex(0)
        return cls(backend, [[z] * n for _ in range(n)])

    @classmethod
    def scalar(cls, backend: Backend, value) -> "CMatrix":
        return cls(backend, [[value]])

    @classmethod
    def from_numpy(cls, backend: Backend, arr: np.ndarray) -> "CMatrix":
        return cls(backend, [[backend.complex(z.real, z.imag) for z in row] for row in arr])

    # views ---------------------------------------------------------------

    def entry(self, i: int, j: int):
        return self.rows[i][j]

    def to_numpy(self) -> np.ndarray:
        return np.array([[complex(z) for z in row] for row in self.rows],
                        dtype=np.complex128)

    def to_json(self) -> list:
        fmt = self.backend.format_real
        return [[[fmt(z.real), fmt(z.imag)] for z in row] for row in self.rows]

    # arithmetic ----------------------------------------------------------

    def __matmul__(self, other: "CMatrix") -> "CMatrix":
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        with self.backend.ctx():
            a, b, n = self.rows, other.rows, self.n
            return CMatrix(self.backend, [
                [sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)]
                for i in range(n)
            ])

    def __add__(self, other: "CMatrix") -> "CMatrix":
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        with self.backend.ctx():
            return CMatrix(self.backend, [
                [a + b for a, b in zip(ra, rb)]
                for ra, rb in zip(self.rows, other.rows)
            ])

    def __sub__(self, other: "CMatrix") -> "CMatrix":
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        with self.backend.ctx():
            return CMatrix(self.backend, [
                [a - b for a, b in zip(ra, rb)]
                for ra, rb in zip(self.rows, other.rows)
            ])

    def scale(self, factor) -> "CMatrix":
        with self.backend.ctx():
            return CMatrix(self.backend, [[factor * z for z in row] for row in self.rows])

    def transpose(self) -> "CMatrix":
        return CMatrix(self.backend,
                       [[self.rows[j][i] for j in range(self.n)]
                        for i in range(self.n)])

    def sub(self, rows: Iterable[int], cols: Iterable[int]) -> "CMatrix":
        return CMatrix(self.backend,
                       [[self.rows[i][j] for j in cols] for i in rows])

    def dagger(self) -> "CMatrix":
        with self.backend.ctx():
            return CMatrix(self.backend, [
                [self.rows[j][i].conjugate() for j in range(self.n)]
                for i in range(self.n)
            ])

    def trace(self):
        with self.backend.ctx():
            return sum(self.rows[i][i] for i in range(self.n))

    def det4(self):
        """Determinant by cofactor expansion; dimension must be four."""
        if self.n != 4:
            raise ValueError("det4 requires a 4x4 matrix")
        a = self.rows

        def minor3(r, cs):
            (i, j, k), (p, q, s) = r, cs
            return (a[i][p] * (a[j][q] * a[k][s] - a[j][s] * a[k][q])
                    - a[i][q] * (a[j][p] * a[k][s] - a[j][s] * a[k][p])
                    + a[i][s] * (a[j][p] * a[k][q] - a[j][q] * a[k][p]))

        with self.backend.ctx():
            rows = (1, 2, 3)
            total = self.backend.complex(0)
            cols = (0, 1, 2, 3)
            for c0 in cols:
                rest = tuple(c for c in cols if c != c0)
                term = a[0][c0] * minor3(rows, rest)
                total = total + term if c0 % 2 == 0 else total - term
            return total


def direct_sum(a: CMatrix, b: CMatrix) -> CMatrix:
    if a.backend != b.backend:
        raise ValueError("backend mismatch")
    z = a.backend.complex(0)
    n, m = a.n, b.n
    rows = [[a.rows[i][j] if j < n else z for j in range(n + m)] for i in range(n)]
    rows += [[z if j < n else b.rows[i - n][j - n] for j in range(n + m)]
             for i in range(n, n + m)]
    return CMatrix(a.backend, rows)


def kron(a: CMatrix, b: CMatrix) -> CMatrix:
    if a.backend != b.backend:
        raise ValueError("backend mismatch")
    with a.backend.ctx():
        n, m = a.n, b.n
        return CMatrix(a.backend, [
            [a.rows[i // m][j // m] * b.rows[i % m][j % m]
             for j in range(n * m)]
            for i in range(n * m)
        ])


def max_abs_diff(a: CMatrix, b: CMatrix) -> float:
    if a.n != b.n:
        raise ValueError("dimension mismatch")
    with a.backend.ctx():
        return max(
            a.backend.abs(a.rows[i][j] - b.rows[i][j])
            for i in range(a.n) for j in range(a.n)
        )


def close_to(a: CMatrix, b: CMatrix, tol: float) -> bool:
    """Entrywise max-norm comparison."""
    return max_abs_diff(a, b) <= tol


def phase_close_to(a: CMatrix, b: CMatrix, tol: float) -> bool:
    """True when b equals a up to one global phase, extracted from tr(b a†)."""
    if a.n != b.n:
        raise ValueError("dimension mismatch")
    with a.backend.ctx():
        t = (b @ a.dagger()).trace()
        mag = a.backend.abs(t)
        if mag <= tol:
            return False
        phase = t / mag
        return close_to(a.scale(phase), b, tol)


def hermitian_eigenvalues(h: CMatrix, tol: float | None = None) -> list:
    """Eigenvalues of a Hermitian matrix by cyclic Jacobi, ascending.

    Complex off-diagonal pivots are absorbed into the rotation's phase, so the
    same sweep works identically for both backends.
    """
    be = h.backend
    with be.ctx():
        n = h.n
        herm_err = max_abs_diff(h, h.dagger())
        scale = max(be.abs(h.rows[i][j]) for i in range(n) for j in range(n))
        scale = max(scale, 1.0 if not be.is_big else mp.mpf(1))
        if be.to_float(herm_err) > 1e-8 * be.to_float(scale):
            raise ValueError("matrix is not Hermitian")

        # project onto the Hermitian part once; rotations preserve it exactly,
        # while any anti-Hermitian rounding noise would survive every sweep
        half = be.complex(0.5)
        a = [[(h.rows[i][j] + h.rows[j][i].conjugate()) * half for j in range(n)]
             for i in range(n)]
        eps = 2.0 ** (-(be.precision_bits - 8))
        for _ in range(60):
            off = max(
                (be.abs(a[p][q]) for p in range(n) for q in range(n) if p != q),
                default=0.0,
            )
            if be.to_float(off) <= eps * be.to_float(scale):
                break
            for p in range(n - 1):
                for q in range(p + 1, n):
                    r = be.abs(a[p][q])
                    if be.to_float(r) <= 1e-4 * eps * be.to_float(scale):
                        continue
                    phase = a[p][q] / r
                    app, aqq = a[p][p].real, a[q][q].real
                    theta = 0.5 * be.atan2(2.0 * r, be.real(aqq - app))
                    c, s = be.cos(theta), be.sin(theta)
                    cp = [a[i][p] * c - a[i][q] * s * phase.conjugate()
                          for i in range(n)]
                    cq = [a[i][p] * s * phase + a[i][q] * c for i in range(n)]
                    for i in range(n):
                        a[i][p], a[i][q] = cp[i], cq[i]
                    rp = [a[p][j] * c - a[q][j] * s * phase for j in range(n)]
                    rq = [a[p][j] * s * phase.conjugate() + a[q][j] * c
                          for j in range(n)]
                    for j in range(n):
                        a[p][j], a[q][j] = rp[j], rq[j]
        else:
            raise RuntimeError("Jacobi sweep failed to converge")
        return sorted(a[i][i].real for i in range(n))
