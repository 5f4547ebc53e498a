"""Gate targets, phase distance, and local-equivalence invariants."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from braidsynth.backends import Backend, CMatrix
from braidsynth.metrics import (
    CNOT_INVARIANTS,
    cnot_distance,
    gate_target,
    global_phase_distance,
    leakage_magnitude,
    local_invariants,
    unitarity_defect,
)


def as_cmatrix(arr, backend=None):
    be = backend or Backend.native64()
    return CMatrix(be, [[be.complex(complex(x)) for x in row] for row in arr])


def random_unitary(rng, n):
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r))).conj()


def test_gate_targets():
    h = gate_target("H").matrix.to_numpy()
    assert np.abs(h @ h - np.eye(2)).max() < 1e-15
    assert h[0, 0] == pytest.approx(1 / np.sqrt(2))
    t = gate_target("T").matrix.to_numpy()
    assert t[1, 1] == pytest.approx(np.exp(1j * np.pi / 4), abs=1e-15)
    c = gate_target("CNOT").matrix.to_numpy()
    assert np.abs(c - np.array([[1, 0, 0, 0], [0, 1, 0, 0],
                                [0, 0, 0, 1], [0, 0, 1, 0]])).max() == 0
    with pytest.raises(ValueError):
        gate_target("S")


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 9), st.floats(0, 2 * np.pi))
def test_phase_distance_ignores_global_phase(seed, phase):
    rng = np.random.default_rng(seed)
    u = random_unitary(rng, 2)
    d = global_phase_distance(as_cmatrix(u), as_cmatrix(np.exp(1j * phase) * u))
    assert float(d) < 1e-7


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_phase_distance_range_and_symmetry(seed):
    rng = np.random.default_rng(seed)
    u, v = random_unitary(rng, 2), random_unitary(rng, 2)
    d1 = float(global_phase_distance(as_cmatrix(u), as_cmatrix(v)))
    d2 = float(global_phase_distance(as_cmatrix(v), as_cmatrix(u)))
    assert 0.0 <= d1 <= 1.0 + 1e-12
    assert d1 == pytest.approx(d2, abs=1e-12)


def test_phase_distance_requires_2x2():
    eye4 = as_cmatrix(np.eye(4))
    with pytest.raises(ValueError):
        global_phase_distance(eye4, eye4)


def test_invariant_fixtures():
    cnot = gate_target("CNOT").matrix
    assert local_invariants(cnot).astuple() == pytest.approx((0, 0, 1), abs=1e-14)
    eye = as_cmatrix(np.eye(4))
    assert local_invariants(eye).astuple() == pytest.approx((1, 0, 3), abs=1e-14)
    swap = as_cmatrix(np.array([[1, 0, 0, 0], [0, 0, 1, 0],
                                [0, 1, 0, 0], [0, 0, 0, 1]]))
    assert local_invariants(swap).astuple() == pytest.approx((-1, 0, -3), abs=1e-14)


def test_cnot_distance_values():
    assert float(cnot_distance(gate_target("CNOT").matrix)) < 1e-14
    # identity sits at squared invariant distance 1 + 0 + 4 = 5
    assert float(cnot_distance(as_cmatrix(np.eye(4)))) == pytest.approx(5.0, abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_invariants_stable_under_local_dressing(seed):
    rng = np.random.default_rng(seed)
    u = random_unitary(rng, 4)
    base = local_invariants(as_cmatrix(u)).astuple()
    ka = np.kron(random_unitary(rng, 2), random_unitary(rng, 2))
    kb = np.kron(random_unitary(rng, 2), random_unitary(rng, 2))
    dressed = local_invariants(as_cmatrix(ka @ u @ kb)).astuple()
    assert dressed == pytest.approx(base, abs=1e-10)


def test_invariants_reject_non_unitary():
    with pytest.raises(ValueError):
        local_invariants(as_cmatrix(np.eye(4) * 1.5))
    with pytest.raises(ValueError):
        local_invariants(as_cmatrix(np.eye(2)))


def test_unitarity_defect():
    rng = np.random.default_rng(3)
    u = random_unitary(rng, 4)
    assert float(unitarity_defect(as_cmatrix(u))) < 1e-13
    # A = 2I gives A†A - I = 3I, so the defect sums to 3 per dimension
    assert float(unitarity_defect(as_cmatrix(2 * np.eye(4)))) == pytest.approx(12.0)


def test_leakage_magnitude():
    assert leakage_magnitude(-0.25 + 0j) == pytest.approx(0.25)


def test_invariants_bigfloat_agree_with_native():
    be = Backend.bigfloat(128)
    cnot_big = gate_target("CNOT", be).matrix
    got = local_invariants(cnot_big).astuple()
    assert tuple(float(g) for g in got) == pytest.approx(CNOT_INVARIANTS, abs=1e-30)
