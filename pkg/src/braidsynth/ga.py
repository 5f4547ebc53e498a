"""Genetic search over fixed-length braidwords.

Individuals are words of a fixed length over the generator alphabet
including inverses; fitness is the negated objective (one-qubit gate
distance, or controlled-not class distance plus a leakage penalty). Each
generation keeps an elite slice, fills the rest by size-3 tournament
selection, single-point crossover, and per-letter mutation to a uniformly
random different letter.

All randomness is drawn from one per-restart stream in a fixed order, and
fitness evaluation consumes no randomness, so results are bit-identical
across runs and thread counts for a fixed seed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .backends import Backend
from .ebm import ONE_QUBIT, TWO_QUBIT, ebm_set
from .kernels import d_cnot_batch, indices_to_signed, stack_with_inverses
from .search import Objective, SearchRecord
from .words import BraidWord, codec_for

# Weight of | |M11| - 1 | in the two-qubit objective; large enough that the
# optimum is leakage-free, so high-precision re-scoring stays meaningful.
LEAKAGE_WEIGHT = 10.0


@dataclass(frozen=True)
class GAConfig:
    word_length: int
    population: int = 200
    generations: int = 500
    crossover_rate: float = 0.8
    mutation_rate: float = 0.03
    elite_fraction: float = 0.05
    restarts: int = 3
    seed: int = 0

    def __post_init__(self):
        if self.word_length < 1:
            raise ValueError("word_length must be positive")
        if self.population < 2:
            raise ValueError("population must be at least 2")
        for rate in (self.crossover_rate, self.mutation_rate,
                     self.elite_fraction):
            if not 0.0 <= rate <= 1.0:
                raise ValueError("rates must lie in [0, 1]")
        if int(self.elite_fraction * self.population) < 1:
            raise ValueError("elite slice must hold at least one individual")

    @property
    def n_elite(self) -> int:
        return int(self.elite_fraction * self.population)


@dataclass(frozen=True)
class Individual:
    word: BraidWord
    fitness: float


@dataclass
class GAOutcome:
    record: SearchRecord
    best: Individual
    seed: int
    restart: int
    generation: int
    objective_value: float
    trace: list = field(default_factory=list)


def _objective_fn(model: str, arity: str, obj: Objective,
                  use_inverses: bool = True):
    ebms = ebm_set(model, arity, Backend.native64())
    gens, _ = stack_with_inverses(ebms.numpy_generators(), use_inverses)

    if arity == TWO_QUBIT:
        if obj.kind != "cnot_local_class":
            raise ValueError("two-qubit GA expects the cnot objective")

        def evaluate(pop):
            u = np.broadcast_to(np.eye(5, dtype=np.complex128),
                                (pop.shape[0], 5, 5)).copy()
            for i in range(pop.shape[1]):
                u = np.matmul(u, gens[pop[:, i]])
            m11 = u[:, 0, 0]
            leak = np.abs(np.sqrt(m11.real ** 2 + m11.imag ** 2) - 1.0)
            vals = d_cnot_batch(u[:, 1:, 1:]) + LEAKAGE_WEIGHT * leak
            return np.where(np.isfinite(vals), vals, np.inf)

        return gens, evaluate

    if arity == ONE_QUBIT:
        if obj.kind != "one_qubit_gate" or obj.target is None:
            raise ValueError("one-qubit GA expects a gate target")
        target_conj = obj.target.matrix.to_numpy().conj()

        def evaluate(pop):
            u = np.broadcast_to(np.eye(2, dtype=np.complex128),
                                (pop.shape[0], 2, 2)).copy()
            for i in range(pop.shape[1]):
                u = np.matmul(u, gens[pop[:, i]])
            tr = np.einsum("jk,pjk->p", target_conj, u)
            return np.sqrt(np.maximum(0.0, 1.0 - np.abs(tr) / 2.0))

        return gens, evaluate

    raise ValueError(f"unknown arity {arity!r}")


def evolve_step(population: np.ndarray, objective: np.ndarray,
                cfg: GAConfig, rng: np.random.Generator,
                alphabet: int) -> np.ndarray:
    """One generation; elites survive, the rest are bred and mutated."""
    p, length = population.shape
    if p != cfg.population:
        raise ValueError("population size mismatch")
    order = np.argsort(objective, kind="stable")
    n_elite = cfg.n_elite
    n_child = p - n_elite

    tourn = rng.integers(0, p, size=(n_child, 2, 3))
    do_cross = rng.random(n_child) < cfg.crossover_rate
    points = rng.integers(1, max(2, length), size=n_child)
    mut_mask = rng.random((n_child, length)) < cfg.mutation_rate
    mut_draw = rng.integers(0, alphabet - 1, size=(n_child, length))

    rank = np.empty(p, np.int64)
    rank[order] = np.arange(p)
    pick = tourn[np.arange(n_child)[:, None],
                 np.arange(2)[None, :],
                 np.argmin(rank[tourn], axis=2)]
    pa, pb = population[pick[:, 0]], population[pick[:, 1]]
    col = np.arange(length)[None, :]
    children = np.where(do_cross[:, None] & (col >= points[:, None]), pb, pa)
    children = np.where(mut_mask,
                        (children + 1 + mut_draw) % alphabet,
                        children)
    return np.concatenate([population[order[:n_elite]], children])


def ga_search(cfg: GAConfig, model: str, arity: str, obj: Objective,
              use_inverses: bool = True) -> GAOutcome:
    """Best word over all restarts, with provenance and a fitness trace."""
    gens, evaluate = _objective_fn(model, arity, obj, use_inverses)
    alphabet = gens.shape[0]
    length = cfg.word_length
    n_plain = alphabet // 2 if use_inverses else alphabet

    best_val = np.inf
    best_word = None
    best_restart = best_gen = -1
    trace = []
    for restart in range(cfg.restarts):
        rng = np.random.default_rng(
            np.random.SeedSequence(entropy=cfg.seed, spawn_key=(restart,)))
        population = rng.integers(0, alphabet, size=(cfg.population, length))
        for gen in range(cfg.generations):
            vals = evaluate(population)
            arg = int(np.argmin(vals))
            if vals[arg] < best_val:
                best_val = float(vals[arg])
                best_word = population[arg].copy()
                best_restart, best_gen = restart, gen
            trace.append((restart, gen, float(vals[arg]),
                          float(np.mean(vals[np.isfinite(vals)]))))
            if gen + 1 < cfg.generations:
                population = evolve_step(population, vals, cfg, rng, alphabet)

    signed = indices_to_signed(best_word, n_plain)
    word = BraidWord(signed, n_plain)
    letters = codec_for(n_plain).encode(word)

    u = np.eye(gens.shape[1], dtype=np.complex128)
    for v in best_word:
        u = u @ gens[int(v)]
    if arity == TWO_QUBIT:
        m11_abs = float(abs(u[0, 0]))
        block = u[1:, 1:]
        dist = float(d_cnot_batch(block[None])[0])
    else:
        m11_abs = None
        block = u
        tc = obj.target.matrix.to_numpy().conj()
        dist = float(np.sqrt(max(0.0, 1.0 - abs(np.einsum("jk,jk", tc, u)) / 2.0)))
    h = block.conj().T @ block - np.eye(block.shape[0])
    defect = float(np.abs(np.linalg.eigvalsh(h)).sum())
    record = SearchRecord(model, length, letters, dist, m11_abs, defect,
                          "native64")
    return GAOutcome(record, Individual(word, -best_val), cfg.seed,
                     best_restart, best_gen, best_val, trace)
