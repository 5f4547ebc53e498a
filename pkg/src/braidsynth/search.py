"""Exhaustive per-length braidword search with a pluggable objective.

Two-qubit searches minimize the controlled-not class distance over words
whose non-computational entry stays on the unit circle within a leakage
tolerance; they run on the compiled scan kernel at machine precision, with
work partitioned by first letter so results are identical for any thread
count, and the per-length survivors can be re-scored at high precision.
One-qubit searches minimize the global-phase-invariant distance to a target
gate and run as a plain scalar walk (the alphabet is tiny).
"""

from __future__ import annotations

import csv
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .backends import Backend
from .ebm import ONE_QUBIT, TWO_QUBIT, EbmSet, braidword_unitary, ebm_set, split_blocks
from .kernels import get_scan, indices_to_signed, stack_with_inverses
from .metrics import (GateTarget, cnot_distance, gate_target,
                      global_phase_distance, unitarity_defect)
from .words import BraidWord, codec_for

LEAKAGE_TOL = 1e-9
DEFAULT_NODE_BUDGET = 500_000_000

CNOT_LOCAL_CLASS = "cnot_local_class"
ONE_QUBIT_GATE = "one_qubit_gate"


@dataclass(frozen=True)
class Objective:
    kind: str
    backend: Backend = field(default_factory=Backend.native64)
    target: GateTarget | None = None

    @classmethod
    def cnot_class(cls, backend: Backend | None = None) -> "Objective":
        return cls(CNOT_LOCAL_CLASS, backend or Backend.native64())

    @classmethod
    def gate(cls, name: str, backend: Backend | None = None) -> "Objective":
        backend = backend or Backend.native64()
        return cls(ONE_QUBIT_GATE, backend, gate_target(name, backend))


@dataclass(frozen=True)
class SearchConfig:
    model: str
    arity: str
    use_inverses: bool
    min_len: int
    max_len: int
    keep_top_k: int = 3
    threads: int = 1
    node_budget: int = DEFAULT_NODE_BUDGET
    leakage_tol: float = LEAKAGE_TOL
    kernel: str | None = None

    def __post_init__(self):
        if not (1 <= self.min_len <= self.max_len):
            raise ValueError("need 1 <= min_len <= max_len")
        if self.keep_top_k < 1:
            raise ValueError("keep_top_k must be positive")


@dataclass(frozen=True)
class SearchRecord:
    model: str
    length: int
    word: str
    distance: float
    m11_abs: float | None
    unitarity_defect: float
    backend: str

    def sort_key(self):
        return (self.distance, self.word)


@dataclass
class SearchResult:
    config: SearchConfig
    objective: Objective
    per_length: dict
    counts: dict
    truncated: bool

    def best(self, length: int) -> SearchRecord | None:
        recs = self.per_length.get(length, [])
        return recs[0] if recs else None

    def cumulative_minima(self) -> dict:
        """Best distance over all lengths up to each length."""
        out, cur = {}, float("inf")
        for length in sorted(self.per_length):
            rec = self.best(length)
            if rec is not None:
                cur = min(cur, rec.distance)
            out[length] = cur
        return out


def _letters_from_row(row, codec):
    signed = indices_to_signed(row, codec.arity)
    return codec.encode(BraidWord(signed, codec.arity))


def _merge_depth(parts, depth, k):
    """Candidates from per-prefix scans, stably ordered, best k."""
    cand = []
    for best_d, best_w in parts:
        for s in range(best_d.shape[1]):
            if np.isfinite(best_d[depth, s]):
                cand.append((float(best_d[depth, s]), best_w[depth, s]))
    cand.sort(key=lambda t: t[0])
    return cand[:k]


def _two_qubit_search(cfg: SearchConfig, obj: Objective) -> SearchResult:
    ebms = ebm_set(cfg.model, TWO_QUBIT, Backend.native64())
    gens, inv_pair = stack_with_inverses(ebms.numpy_generators(),
                                         cfg.use_inverses)
    scan = get_scan(cfg.kernel)
    a = gens.shape[0]
    per_prefix_budget = max(1, cfg.node_budget // a)
    codec = codec_for(5)

    def run(first):
        return scan(gens, cfg.max_len, inv_pair, cfg.leakage_tol,
                    cfg.keep_top_k, np.array([first], np.int64),
                    per_prefix_budget)

    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            results = list(pool.map(run, range(a)))
    else:
        results = [run(first) for first in range(a)]

    truncated = any(r[3] for r in results)
    counts = {
        length: int(sum(r[2][length] for r in results))
        for length in range(cfg.min_len, cfg.max_len + 1)
    }
    parts = [(r[0], r[1]) for r in results]
    per_length = {}
    for length in range(cfg.min_len, cfg.max_len + 1):
        records = []
        for dist, row in _merge_depth(parts, length, cfg.keep_top_k):
            letters = _letters_from_row(row, codec)
            m11, defect = _native_block_stats(gens, row, length)
            records.append(SearchRecord(cfg.model, length, letters, dist,
                                        m11, defect, "native64"))
        per_length[length] = records
    return SearchResult(cfg, obj, per_length, counts, truncated)


def _native_block_stats(gens, row, length):
    u = np.eye(5, dtype=np.complex128)
    for v in row[:length]:
        u = u @ gens[int(v)]
    m11 = abs(u[0, 0])
    block = u[1:, 1:]
    h = block.conj().T @ block - np.eye(4)
    defect = float(np.abs(np.linalg.eigvalsh(h)).sum())
    return float(m11), defect


def _one_qubit_search(cfg: SearchConfig, obj: Objective) -> SearchResult:
    ebms = ebm_set(cfg.model, ONE_QUBIT, Backend.native64())
    gens, inv_pair = stack_with_inverses(ebms.numpy_generators(),
                                         cfg.use_inverses)
    target = obj.target.matrix.to_numpy()
    a = gens.shape[0]
    codec = codec_for(2)
    k = cfg.keep_top_k
    best_d = np.full((cfg.max_len + 1, k), np.inf)
    best_w = np.full((cfg.max_len + 1, k, cfg.max_len), -1, np.int64)
    counts = {length: 0 for length in range(1, cfg.max_len + 1)}
    total = 0
    truncated = False

    ustk = np.empty((cfg.max_len + 1, 2, 2), np.complex128)
    ustk[0] = np.eye(2)
    idx = np.full(cfg.max_len, -1, np.int64)
    pos = 0
    while pos >= 0:
        idx[pos] += 1
        if idx[pos] == a:
            idx[pos] = -1
            pos -= 1
            continue
        i = idx[pos]
        if pos > 0 and inv_pair[idx[pos - 1]] == i:
            continue
        if total >= cfg.node_budget:
            truncated = True
            break
        ustk[pos + 1] = ustk[pos] @ gens[i]
        depth = pos + 1
        counts[depth] += 1
        total += 1
        tr = np.trace(target.conj().T @ ustk[depth])
        dist = float(np.sqrt(max(0.0, 1.0 - abs(tr) / 2.0)))
        dvec, wmat = best_d[depth], best_w[depth]
        if dist < dvec[k - 1]:
            j = k - 1
            while j > 0 and dist < dvec[j - 1]:
                dvec[j] = dvec[j - 1]
                wmat[j] = wmat[j - 1]
                j -= 1
            dvec[j] = dist
            wmat[j, :] = -1
            wmat[j, :depth] = idx[:depth]
        if depth < cfg.max_len:
            pos += 1

    per_length = {}
    for length in range(cfg.min_len, cfg.max_len + 1):
        records = []
        for s in range(k):
            if not np.isfinite(best_d[length, s]):
                continue
            letters = _letters_from_row(best_w[length, s], codec)
            u = np.eye(2, dtype=np.complex128)
            for v in best_w[length, s][:length]:
                u = u @ gens[int(v)]
            h = u.conj().T @ u - np.eye(2)
            defect = float(np.abs(np.linalg.eigvalsh(h)).sum())
            records.append(SearchRecord(cfg.model, length, letters,
                                        float(best_d[length, s]), None,
                                        defect, "native64"))
        per_length[length] = records
    return SearchResult(cfg, obj,
                        per_length,
                        {length: counts[length]
                         for length in range(cfg.min_len, cfg.max_len + 1)},
                        truncated)


def exhaustive_search(cfg: SearchConfig, obj: Objective) -> SearchResult:
    """Depth-first minimum-objective word for every length in range."""
    if cfg.arity == TWO_QUBIT:
        if obj.kind != CNOT_LOCAL_CLASS:
            raise ValueError("two-qubit search expects the cnot objective")
        return _two_qubit_search(cfg, obj)
    if cfg.arity == ONE_QUBIT:
        if obj.kind != ONE_QUBIT_GATE or obj.target is None:
            raise ValueError("one-qubit search expects a gate target")
        return _one_qubit_search(cfg, obj)
    raise ValueError(f"unknown arity {cfg.arity!r}")


def rank_words(records, k: int):
    """Stable top-k by objective value then lexicographic word."""
    return sorted(records, key=SearchRecord.sort_key)[:k]


def rescore_record(record: SearchRecord, arity: str,
                   backend: Backend, target: GateTarget | None = None,
                   ebms: EbmSet | None = None) -> SearchRecord:
    """Re-evaluate one record's word at another precision."""
    ebms = ebms or ebm_set(record.model, arity, backend)
    word = codec_for(5 if arity == TWO_QUBIT else 2).decode(record.word)
    with backend.ctx():
        u = braidword_unitary(ebms, word)
        if arity == TWO_QUBIT:
            m11, a, _ = split_blocks(u)
            dist = backend.to_float(cnot_distance(a))
            m11_abs = backend.to_float(abs(m11))
            defect = backend.to_float(unitarity_defect(a))
        else:
            tgt = gate_target(target.name, backend) if target else None
            dist = backend.to_float(global_phase_distance(tgt.matrix, u))
            m11_abs = None
            defect = backend.to_float(unitarity_defect(u))
    return replace(record, distance=dist, m11_abs=m11_abs,
                   unitarity_defect=defect, backend=backend.label())


def rescore_result(result: SearchResult, backend: Backend) -> SearchResult:
    """High-precision re-scoring of every surviving record."""
    cfg = result.config
    ebms = ebm_set(cfg.model, cfg.arity, backend)
    target = result.objective.target
    per_length = {
        length: [rescore_record(r, cfg.arity, backend, target, ebms)
                 for r in records]
        for length, records in result.per_length.items()
    }
    rescored = SearchResult(cfg, result.objective, per_length,
                            result.counts, result.truncated)
    return rescored


CSV_COLUMNS = ("model", "length", "word", "distance", "m11_abs",
               "unitarity_defect", "backend")


def write_records_csv(path, records) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for r in records:
            writer.writerow([
                r.model, r.length, r.word, repr(r.distance),
                "" if r.m11_abs is None else repr(r.m11_abs),
                repr(r.unitarity_defect), r.backend,
            ])
