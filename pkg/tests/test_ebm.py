"""Elementary braid matrices: construction, products, and conventions."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from braidsynth.anyons import GATE_MODELS
from braidsynth.backends import Backend
from braidsynth.ebm import (
    FIBONACCI,
    ONE_QUBIT,
    TWO_QUBIT,
    UnsupportedModelError,
    braid_relation_residuals,
    braidword_unitary,
    ebm_set,
    max_unitarity_error,
    split_blocks,
    studied_models,
)
from braidsynth.words import BraidWord

ALL_SETS = ([(name, ONE_QUBIT) for name in GATE_MODELS]
            + [(name, TWO_QUBIT) for name in GATE_MODELS]
            + [(FIBONACCI, ONE_QUBIT)])


@pytest.mark.parametrize("name,arity", ALL_SETS)
def test_generators_unitary_native(name, arity):
    ebms = ebm_set(name, arity, Backend.native64())
    assert max_unitarity_error(ebms) < 1e-12


def test_shapes_and_bases():
    one = ebm_set("V113_3", ONE_QUBIT)
    assert len(one.generators) == 2
    assert one.generators[0].n == 2
    assert one.basis == ("0", "1")
    two = ebm_set("V113_3", TWO_QUBIT)
    assert len(two.generators) == 5
    assert two.generators[0].n == 5
    assert two.basis[0] == "NC"
    assert len(two.basis) == 5


def test_unsupported_models():
    with pytest.raises(UnsupportedModelError):
        ebm_set("V111_1", ONE_QUBIT)
    with pytest.raises(UnsupportedModelError):
        ebm_set(FIBONACCI, TWO_QUBIT)


def test_fibonacci_generators():
    ebms = ebm_set(FIBONACCI, ONE_QUBIT)
    s1 = ebms.generators[0].to_numpy()
    assert s1[0, 0] == pytest.approx(np.exp(-4j * np.pi / 5), abs=1e-15)
    assert s1[1, 1] == pytest.approx(np.exp(3j * np.pi / 5), abs=1e-15)
    assert abs(s1[0, 1]) == 0.0
    s2 = ebms.generators[1].to_numpy()
    phi = (1 + np.sqrt(5)) / 2
    f = np.array([[1 / phi, phi ** -0.5], [phi ** -0.5, -1 / phi]])
    assert np.abs(s2 - f @ s1 @ f).max() < 1e-12


def signed_words(arity, max_len=8):
    values = [v for v in range(-arity, arity + 1) if v != 0]
    return st.lists(st.sampled_from(values), max_size=max_len)


@settings(max_examples=30, deadline=None)
@given(signed_words(5), signed_words(5))
def test_braidword_product_homomorphism(a, b):
    ebms = ebm_set("V131_3", TWO_QUBIT)
    wa, wb = BraidWord(tuple(a), 5), BraidWord(tuple(b), 5)
    ua = braidword_unitary(ebms, wa).to_numpy()
    ub = braidword_unitary(ebms, wb).to_numpy()
    uab = braidword_unitary(ebms, wa * wb).to_numpy()
    assert np.abs(uab - ua @ ub).max() < 1e-12


@settings(max_examples=30, deadline=None)
@given(signed_words(5))
def test_inverse_word_gives_dagger(letters):
    ebms = ebm_set("V113_3", TWO_QUBIT)
    w = BraidWord(tuple(letters), 5)
    u = braidword_unitary(ebms, w).to_numpy()
    ui = braidword_unitary(ebms, w.inverse()).to_numpy()
    assert np.abs(ui - u.conj().T).max() < 1e-12


@settings(max_examples=30, deadline=None)
@given(signed_words(5))
def test_order_conventions_are_reverses(letters):
    ebms = ebm_set("V133_1", TWO_QUBIT)
    w = BraidWord(tuple(letters), 5)
    l2r = braidword_unitary(ebms, w, order="l2r").to_numpy()
    r2l = braidword_unitary(ebms,
                            BraidWord(tuple(reversed(letters)), 5),
                            order="r2l").to_numpy()
    assert np.abs(l2r - r2l).max() < 1e-12


def test_order_argument_validation():
    ebms = ebm_set("V113_3", TWO_QUBIT)
    with pytest.raises(ValueError):
        braidword_unitary(ebms, BraidWord((1,), 5), order="middle")


def test_split_blocks_identity():
    ebms = ebm_set("V113_3", TWO_QUBIT)
    w = BraidWord((1, -1), 5)
    m11, block, off = split_blocks(braidword_unitary(ebms, w))
    assert abs(abs(m11) - 1) < 1e-14
    assert float(off) < 1e-14
    assert np.abs(block.to_numpy() - np.eye(4)).max() < 1e-14


def test_generator_matches_signed_lookup():
    ebms = ebm_set("V131_3", TWO_QUBIT)
    g2 = ebms.generator(2).to_numpy()
    g2inv = ebms.generator(-2).to_numpy()
    assert np.abs(g2inv - g2.conj().T).max() == 0.0


def test_partner_sigma3_is_negated():
    # paired models share one-qubit generators up to phase; their central
    # two-qubit generators then differ exactly by an overall sign
    a = ebm_set("V131_3", TWO_QUBIT).generators[2].to_numpy()
    b = ebm_set("V313_1", TWO_QUBIT).generators[2].to_numpy()
    assert np.abs(a + b).max() < 1e-12


def test_braid_relations_fail_for_these_generators():
    # the five two-qubit generators do not satisfy the braid-group
    # relations; the search treats them as a free alphabet
    res = braid_relation_residuals(ebm_set("V113_3", TWO_QUBIT))
    assert max(res.values()) > 0.1


def test_studied_models_list():
    assert studied_models() == ("V113_3", "V131_3", "V133_1")


def test_bigfloat_generators_match_native():
    big = ebm_set("V113_3", TWO_QUBIT, Backend.bigfloat(192))
    nat = ebm_set("V113_3", TWO_QUBIT, Backend.native64())
    for gb, gn in zip(big.generators, nat.generators):
        assert np.abs(gb.to_numpy() - gn.to_numpy()).max() < 1e-15
