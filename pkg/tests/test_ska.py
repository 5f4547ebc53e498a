"""Recursive gate compilation and the group-commutator decomposition."""

import numpy as np
import pytest

from braidsynth.ga import GAConfig
from braidsynth.ska import (
    ANGLE_DOMAIN_LIMIT,
    Approximation,
    DecompositionDomainError,
    SKAConfig,
    approximation_to_json,
    cache_key,
    commutator_angle,
    compile_levels,
    gc_decompose,
    load_cache,
    save_cache,
    solovay_kitaev,
)


def rotation(axis, angle):
    axis = np.asarray(axis, float)
    axis = axis / np.linalg.norm(axis)
    x, y, z = axis
    sx = np.array([[0, 1], [1, 0]], complex)
    sy = np.array([[0, -1j], [1j, 0]], complex)
    sz = np.array([[1, 0], [0, -1]], complex)
    h = x * sx + y * sy + z * sz
    return np.cos(angle / 2) * np.eye(2) - 1j * np.sin(angle / 2) * h


def test_gc_identity():
    v, w = gc_decompose(np.eye(2, dtype=complex))
    assert np.abs(v - np.eye(2)).max() < 1e-12
    assert np.abs(w - np.eye(2)).max() < 1e-12


def test_gc_reconstruction_sample():
    rng = np.random.default_rng(21)
    worst = 0.0
    for _ in range(100):
        axis = rng.normal(size=3)
        theta = rng.uniform(0.0, 3.0)
        phase = np.exp(1j * rng.uniform(0, 2 * np.pi))
        delta = phase * rotation(axis, theta)
        v, w = gc_decompose(delta)
        recon = v @ w @ v.conj().T @ w.conj().T
        su = delta / np.sqrt(np.linalg.det(delta))
        if np.real(np.trace(su)) < 0:
            su = -su
        worst = max(worst, np.abs(recon - su).max())
    assert worst < 1e-12


def test_gc_factors_are_balanced_rotations():
    delta = rotation([0.3, -0.5, 0.8], 1.7)
    v, w = gc_decompose(delta)
    phi = commutator_angle(1.7)
    for m in (v, w):
        assert np.abs(m.conj().T @ m - np.eye(2)).max() < 1e-13
        ang = 2 * np.arccos(np.clip(np.real(np.trace(m)) / 2, -1, 1))
        assert ang == pytest.approx(phi, abs=1e-10)


def test_commutator_angle_against_direct_evaluation():
    # phi is correct iff the commutator of the two balanced rotations
    # it parameterizes rotates by exactly theta
    for theta in np.linspace(1e-4, 3.1, 40):
        phi = commutator_angle(theta)
        v = rotation([1, 0, 0], phi)
        w = rotation([0, 1, 0], phi)
        comm = v @ w @ v.conj().T @ w.conj().T
        got = 2 * np.arccos(np.clip(np.real(np.trace(comm)) / 2, -1, 1))
        assert got == pytest.approx(theta, abs=1e-9)


def test_commutator_angle_monotone_and_small_angle_scaling():
    thetas = np.linspace(1e-6, 3.0, 200)
    phis = np.array([commutator_angle(t) for t in thetas])
    assert (np.diff(phis) > 0).all()
    # the commutator of two phi rotations turns by about phi^2, so
    # phi ~ sqrt(theta): the correction factors shrink super-linearly
    for t in (1e-4, 1e-8, 1e-12):
        assert commutator_angle(t) == pytest.approx(np.sqrt(t), rel=1e-3)


def test_gc_domain_error_near_pi():
    with pytest.raises(DecompositionDomainError):
        gc_decompose(rotation([0, 0, 1], np.pi))
    gc_decompose(rotation([0, 0, 1], ANGLE_DOMAIN_LIMIT - 1e-3))


def test_config_validation():
    with pytest.raises(ValueError):
        SKAConfig("V131_3", basic_length=30,
                  ga=GAConfig(word_length=20))
    cfg = SKAConfig("V131_3", basic_length=12)
    assert cfg.ga.word_length == 12


def tiny_cfg(model="V131_3", **kw):
    base = dict(basic_length=10, max_level=1,
                ga=GAConfig(word_length=10, population=40, generations=40,
                            restarts=1, seed=7))
    base.update(kw)
    return SKAConfig(model, **base)


def test_levels_scale_length_and_refine():
    cfg = tiny_cfg()
    from braidsynth.metrics import gate_target
    target = gate_target("H").matrix.to_numpy()
    a0 = solovay_kitaev(target, 0, cfg)
    a1 = solovay_kitaev(target, 1, cfg)
    assert len(a0.word) == 10
    assert len(a1.word) == 10 * 5
    assert a1.distance < a0.distance
    assert a0.level == 0 and a1.level == 1


def test_word_matrix_consistency():
    cfg = tiny_cfg()
    from braidsynth.backends import Backend
    from braidsynth.ebm import ONE_QUBIT, braidword_unitary, ebm_set
    from braidsynth.metrics import gate_target
    ebms = ebm_set("V131_3", ONE_QUBIT, Backend.native64())
    target = gate_target("T").matrix.to_numpy()
    for level in (0, 1):
        appr = solovay_kitaev(target, level, cfg)
        u = braidword_unitary(ebms, appr.word).to_numpy()
        assert np.abs(u - appr.matrix.to_numpy()).max() < 1e-10
        assert appr.word.arity == 2


def test_level_and_unitarity_guards():
    cfg = tiny_cfg()
    with pytest.raises(ValueError):
        solovay_kitaev(np.eye(2) * 2.0, 0, cfg)
    with pytest.raises(ValueError):
        solovay_kitaev(np.eye(2, dtype=complex), 5, cfg)


def test_compile_levels_returns_all_levels():
    cfg = tiny_cfg()
    got = compile_levels("H", cfg)
    assert sorted(got) == [0, 1]
    assert all(isinstance(a, Approximation) for a in got.values())
    assert got[1].distance <= got[0].distance


def test_cache_round_trip(tmp_path):
    cfg = tiny_cfg()
    levels = compile_levels("H", cfg)
    key = cache_key("V131_3", "H", cfg.basic_length, cfg.ga.seed)
    cache = {key: {str(lv): approximation_to_json(a, "V131_3")
                   for lv, a in levels.items()}}
    path = tmp_path / "cache.json"
    save_cache(path, cache)
    loaded = load_cache(path)
    assert loaded == cache
    entry = loaded[key]["1"]
    assert entry["level"] == 1
    assert entry["length"] == 50
    assert entry["model"] == "V131_3"
    from braidsynth.words import codec_for
    w = codec_for(2).decode(entry["word"])
    assert len(w) == 50
    assert load_cache(tmp_path / "missing.json") == {}


def test_approximation_json_fields():
    cfg = tiny_cfg()
    appr = compile_levels("T", cfg)[0]
    blob = approximation_to_json(appr, "V131_3")
    assert set(blob) == {"level", "word", "length", "distance", "model"}
    assert blob["distance"] == pytest.approx(appr.distance)
