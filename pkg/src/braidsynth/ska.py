"""Recursive Solovay-Kitaev compilation of one-qubit gates over a model's
generator alphabet, with genetic search supplying the level-0 words.

Each level refines the previous approximation U by the balanced group
commutator: the residual rotation delta = target U† is split into rotations
V, W of equal angle about orthogonal axes with delta = V W V† W†, the parts
are approximated at the previous level, and the words are concatenated as
V W V† W† U. Word length therefore grows exactly five-fold per level.
Global phases are stripped only inside the decomposition; reported
distances use the phase-invariant measure throughout.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .backends import Backend, CMatrix
from .ebm import ONE_QUBIT, ebm_set
from .ga import GAConfig, ga_search
from .metrics import GateTarget, gate_target
from .search import ONE_QUBIT_GATE, Objective
from .words import BraidWord, codec_for

ANGLE_DOMAIN_LIMIT = np.pi - 1e-6


class DecompositionDomainError(ValueError):
    """Residual rotation angle too close to a half turn to split."""


@dataclass(frozen=True)
class SKAConfig:
    model: str
    basic_length: int = 30
    max_level: int = 3
    ga: GAConfig | None = None

    def __post_init__(self):
        if self.basic_length < 1:
            raise ValueError("basic_length must be positive")
        if self.max_level < 0:
            raise ValueError("max_level must be non-negative")
        if self.ga is None:
            object.__setattr__(self, "ga",
                               GAConfig(word_length=self.basic_length))
        elif self.ga.word_length != self.basic_length:
            raise ValueError("ga.word_length must equal basic_length")


@dataclass(frozen=True)
class Approximation:
    word: BraidWord
    matrix: CMatrix
    distance: float
    level: int


_PAULI = (
    np.array([[0, 1], [1, 0]], dtype=np.complex128),
    np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    np.array([[1, 0], [0, -1]], dtype=np.complex128),
)


def _to_su2(u: np.ndarray) -> np.ndarray:
    """Special-unitary representative with non-negative trace.

    The square root of the determinant fixes the phase only up to sign;
    picking the branch nearer the identity keeps rotation angles in
    [0, pi] so the commutator split is well defined.
    """
    su = u / np.sqrt(u[0, 0] * u[1, 1] - u[0, 1] * u[1, 0])
    if np.real(su[0, 0] + su[1, 1]) < 0:
        su = -su
    return su


def _axis_angle(su: np.ndarray):
    """Rotation angle and unit axis of an SU(2) element."""
    c = np.clip(np.real(su[0, 0] + su[1, 1]) / 2.0, -1.0, 1.0)
    ax = np.real(1j * (su[0, 1] + su[1, 0]) / 2.0)
    ay = np.real((su[1, 0] - su[0, 1]) / 2.0)
    az = np.real(1j * (su[0, 0] - su[1, 1]) / 2.0)
    s = np.sqrt(ax * ax + ay * ay + az * az)
    theta = 2.0 * np.arctan2(s, c)
    if s < 1e-300:
        return theta, np.array([0.0, 0.0, 1.0])
    return theta, np.array([ax, ay, az]) / s


def _rotation(axis: np.ndarray, angle: float) -> np.ndarray:
    gen = axis[0] * _PAULI[0] + axis[1] * _PAULI[1] + axis[2] * _PAULI[2]
    return (np.cos(angle / 2.0) * np.eye(2)
            - 1j * np.sin(angle / 2.0) * gen)


def _align(from_axis: np.ndarray, to_axis: np.ndarray) -> np.ndarray:
    """Rotation matrix mapping one Bloch axis onto another."""
    cross = np.cross(from_axis, to_axis)
    dot = float(np.clip(np.dot(from_axis, to_axis), -1.0, 1.0))
    norm = np.linalg.norm(cross)
    if norm < 1e-12:
        if dot > 0:
            return np.eye(2, dtype=np.complex128)
        helper = np.array([1.0, 0.0, 0.0])
        if abs(from_axis[0]) > 0.9:
            helper = np.array([0.0, 1.0, 0.0])
        perp = np.cross(from_axis, helper)
        return _rotation(perp / np.linalg.norm(perp), np.pi)
    return _rotation(cross / norm, np.arctan2(norm, dot))


def commutator_angle(theta: float) -> float:
    """Common rotation angle phi of the balanced-commutator parts.

    Solves sin(theta/2) = 2 sin^2(phi/2) sqrt(1 - sin^4(phi/2)) in closed
    form: sin^4(phi/2) = (1 - sqrt(1 - sin^2(theta/2))) / 2, evaluated as
    s^2 / (2 (1 + sqrt(1 - s^2))) so tiny angles do not cancel to zero.
    """
    s2 = np.sin(theta / 2.0) ** 2
    quartic = s2 / (2.0 * (1.0 + np.sqrt(max(0.0, 1.0 - s2))))
    return 2.0 * np.arcsin(min(1.0, quartic ** 0.25))


def gc_decompose(delta):
    """Split a near-identity unitary into a balanced group commutator.

    Returns (V, W) with V W V† W† equal to delta after stripping delta's
    global phase; both are rotations by the same angle about orthogonal
    axes. Matches the input type (CMatrix in, CMatrix out).
    """
    as_cmatrix = isinstance(delta, CMatrix)
    d = delta.to_numpy() if as_cmatrix else np.asarray(delta, np.complex128)
    if d.shape != (2, 2):
        raise ValueError("gc_decompose requires a 2x2 matrix")
    su = _to_su2(d)
    theta, axis = _axis_angle(su)
    if theta >= ANGLE_DOMAIN_LIMIT:
        raise DecompositionDomainError(
            f"rotation angle {theta:.6f} too close to a half turn")
    phi = commutator_angle(theta)
    v = _rotation(np.array([1.0, 0.0, 0.0]), phi)
    w = _rotation(np.array([0.0, 1.0, 0.0]), phi)
    comm = v @ w @ v.conj().T @ w.conj().T
    _, comm_axis = _axis_angle(_to_su2(comm))
    sim = _align(comm_axis, axis)
    v = sim @ v @ sim.conj().T
    w = sim @ w @ sim.conj().T
    if as_cmatrix:
        be = Backend.native64()
        return CMatrix.from_numpy(be, v), CMatrix.from_numpy(be, w)
    return v, w


def _phase_distance(target: np.ndarray, u: np.ndarray) -> float:
    tr = np.trace(target.conj().T @ u)
    return float(np.sqrt(max(0.0, 1.0 - abs(tr) / 2.0)))


class SolovayKitaev:
    """Compiler instance holding the model's generators and a level memo."""

    def __init__(self, cfg: SKAConfig):
        self.cfg = cfg
        backend = Backend.native64()
        ebms = ebm_set(cfg.model, ONE_QUBIT, backend)
        plain = ebms.numpy_generators()
        self._gens = np.concatenate([plain, plain.conj().transpose(0, 2, 1)])
        self._backend = backend
        self._memo = {}

    def _matrix_for(self, word: BraidWord) -> np.ndarray:
        u = np.eye(2, dtype=np.complex128)
        for v in word.letters:
            idx = v - 1 if v > 0 else 2 + (-v) - 1
            u = u @ self._gens[idx]
        return u

    def basic_approximation(self, target: np.ndarray) -> Approximation:
        """Level-0 word from genetic search against the target."""
        be = self._backend
        tgt = GateTarget("custom", CMatrix.from_numpy(be, target))
        obj = Objective(kind=ONE_QUBIT_GATE, backend=be, target=tgt)
        outcome = ga_search(self.cfg.ga, self.cfg.model, ONE_QUBIT, obj)
        word = outcome.best.word
        mat = self._matrix_for(word)
        return Approximation(word, CMatrix.from_numpy(be, mat),
                             _phase_distance(target, mat), 0)

    def approximate(self, target: np.ndarray, level: int) -> Approximation:
        if level < 0:
            raise ValueError("level must be non-negative")
        key = (level, target.tobytes())
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        if level == 0:
            result = self.basic_approximation(target)
        else:
            prev = self.approximate(target, level - 1)
            u_prev = prev.matrix.to_numpy()
            v, w = gc_decompose(target @ u_prev.conj().T)
            va = self.approximate(v, level - 1)
            wa = self.approximate(w, level - 1)
            word = (va.word * wa.word * va.word.inverse()
                    * wa.word.inverse() * prev.word)
            va_m, wa_m = va.matrix.to_numpy(), wa.matrix.to_numpy()
            mat = (va_m @ wa_m @ va_m.conj().T @ wa_m.conj().T @ u_prev)
            result = Approximation(word,
                                   CMatrix.from_numpy(self._backend, mat),
                                   _phase_distance(target, mat), level)
        self._memo[key] = result
        return result


def solovay_kitaev(target, level: int, cfg: SKAConfig) -> Approximation:
    """Level-n approximation of a 2x2 unitary target over cfg.model."""
    t = target.to_numpy() if isinstance(target, CMatrix) else np.asarray(
        target, np.complex128)
    err = np.abs(t.conj().T @ t - np.eye(2)).max()
    if err > 1e-10:
        raise ValueError(f"target deviates from unitarity by {err:.3e}")
    if level > cfg.max_level:
        raise ValueError("level exceeds cfg.max_level")
    return SolovayKitaev(cfg).approximate(t, level)


def compile_levels(gate_name: str, cfg: SKAConfig) -> dict:
    """All approximations of a named gate up to cfg.max_level, keyed by level."""
    target = gate_target(gate_name).matrix.to_numpy()
    compiler = SolovayKitaev(cfg)
    return {level: compiler.approximate(target, level)
            for level in range(cfg.max_level + 1)}


def cache_key(model: str, gate: str, basic_length: int, seed: int) -> str:
    return f"{model}:{gate}:L{basic_length}:s{seed}"


def load_cache(path) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, ValueError):
        return {}


def save_cache(path, cache: dict) -> None:
    with open(path, "w") as fh:
        json.dump(cache, fh, indent=1, sort_keys=True)


def approximation_to_json(approx: Approximation, model: str) -> dict:
    letters = codec_for(approx.word.arity).encode(approx.word)
    return {
        "level": approx.level,
        "word": letters,
        "length": len(approx.word),
        "distance": approx.distance,
        "model": model,
    }
