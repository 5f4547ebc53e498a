"""Precision backends and the minimal complex-matrix layer."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from braidsynth.backends import (
    Backend,
    CMatrix,
    direct_sum,
    hermitian_eigenvalues,
    kron,
    max_abs_diff,
    phase_close_to,
)


def random_unitary(rng, n):
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def test_parse_and_labels():
    assert Backend.parse("native64").label() == "native64"
    assert Backend.parse("bigfloat").precision_bits == 256
    assert Backend.parse("bigfloat:128").label() == "bigfloat:128"
    with pytest.raises(ValueError):
        Backend.parse("quad")


def test_zero_threshold_scales_with_precision():
    assert Backend.native64().zero_threshold == pytest.approx(10 ** -10.6)
    assert Backend.bigfloat(256).zero_threshold == pytest.approx(10 ** -51.2)
    assert Backend.bigfloat(512).zero_threshold < 1e-100


def test_exp_ipi_exactness():
    be = Backend.bigfloat(256)
    with be.ctx():
        minus_one = be.exp_ipi(12, 12)
        assert be.to_float(be.abs(minus_one + be.complex(1))) < 1e-70
        ninth = be.exp_ipi(9, 12)
        # e^{i 9 pi/12} = (-1 + i) / sqrt(2)
        assert be.to_float(abs(float(ninth.real) + np.sqrt(0.5))) < 1e-15
        assert be.to_float(abs(float(ninth.imag) - np.sqrt(0.5))) < 1e-15


def test_cmatrix_matmul_against_numpy():
    rng = np.random.default_rng(5)
    be = Backend.native64()
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    b = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    ca, cb = CMatrix.from_numpy(be, a), CMatrix.from_numpy(be, b)
    assert np.abs((ca @ cb).to_numpy() - a @ b).max() < 1e-12
    assert np.abs((ca + cb).to_numpy() - (a + b)).max() < 1e-15
    assert np.abs((ca - cb).to_numpy() - (a - b)).max() < 1e-15
    assert np.abs(ca.dagger().to_numpy() - a.conj().T).max() == 0.0
    assert abs(ca.trace() - np.trace(a)) < 1e-15


def test_det4_against_numpy():
    rng = np.random.default_rng(6)
    be = Backend.native64()
    for _ in range(20):
        a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        ca = CMatrix.from_numpy(be, a)
        assert abs(ca.det4() - np.linalg.det(a)) < 1e-10


def test_kron_and_direct_sum_shapes():
    be = Backend.native64()
    rng = np.random.default_rng(7)
    a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    b = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    ca, cb = CMatrix.from_numpy(be, a), CMatrix.from_numpy(be, b)
    assert np.abs(kron(ca, cb).to_numpy() - np.kron(a, b)).max() < 1e-15
    ds = direct_sum(CMatrix.scalar(be, be.complex(3)), ca).to_numpy()
    assert ds.shape == (3, 3)
    assert ds[0, 0] == 3
    assert np.abs(ds[1:, 1:] - a).max() == 0.0
    assert np.abs(ds[0, 1:]).max() == 0.0


def test_phase_close_to():
    be = Backend.native64()
    rng = np.random.default_rng(8)
    u = random_unitary(rng, 3)
    cu = CMatrix.from_numpy(be, u)
    cv = CMatrix.from_numpy(be, np.exp(1j * 0.37) * u)
    assert phase_close_to(cu, cv, 1e-12)
    cw = CMatrix.from_numpy(be, random_unitary(rng, 3))
    assert not phase_close_to(cu, cw, 1e-6)


def test_hermitian_eigenvalues_native_matches_numpy():
    rng = np.random.default_rng(9)
    be = Backend.native64()
    z = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
    h = z + z.conj().T
    got = sorted(be.to_float(v) for v in
                 hermitian_eigenvalues(CMatrix.from_numpy(be, h)))
    want = sorted(np.linalg.eigvalsh(h))
    assert np.abs(np.array(got) - np.array(want)).max() < 1e-10


def test_hermitian_eigenvalues_bigfloat_on_rounded_input():
    # float64-rounded Hermitian input carries anti-Hermitian noise that a
    # unitary similarity cannot remove; the solver must project it away
    # and still converge far below double precision
    rng = np.random.default_rng(10)
    be = Backend.bigfloat(256)
    u = random_unitary(rng, 4)
    h64 = (u * np.array([1.0, 1.0, 0.5, -0.25])) @ u.conj().T
    ch = CMatrix.from_numpy(be, h64)
    vals = sorted(be.to_float(v) for v in hermitian_eigenvalues(ch))
    want = sorted(np.linalg.eigvalsh(h64))
    assert np.abs(np.array(vals) - np.array(want)).max() < 1e-12


def test_hermitian_eigenvalues_degenerate_spectrum():
    be = Backend.bigfloat(192)
    with be.ctx():
        eye = CMatrix.eye(be, 4)
        vals = [be.to_float(v) for v in hermitian_eigenvalues(eye)]
    assert vals == [1.0, 1.0, 1.0, 1.0]


def test_bigfloat_identity_product_is_exact():
    be = Backend.bigfloat(256)
    with be.ctx():
        s = CMatrix.from_numpy(Backend.native64(),
                               np.array([[0, 1], [1, 0]], complex))
        s = CMatrix(be, [[be.complex(0), be.complex(1)],
                         [be.complex(1), be.complex(0)]])
        prod = s @ s
        assert max_abs_diff(prod, CMatrix.eye(be, 2)) == 0


@settings(max_examples=25)
@given(st.integers(min_value=2, max_value=5))
def test_eye_and_scalar(n):
    be = Backend.native64()
    eye = CMatrix.eye(be, n).to_numpy()
    assert np.abs(eye - np.eye(n)).max() == 0.0
