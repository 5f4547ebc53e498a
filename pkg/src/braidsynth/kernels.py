"""Hot search kernels: depth-first braidword scans minimizing the
controlled-not class distance.

Two interchangeable implementations are provided. The jit kernel walks the
freely-reduced word tree one node at a time with a prefix-product stack. The
numpy twin walks the same tree but evaluates the last few levels of each
subtree as batched matrix products. Selection is by the BRAIDSYNTH_KERNEL
environment variable ("numba", the default, or "numpy").

Both return, for every word length up to the limit, the k best admissible
words in ascending distance order (ties resolved toward the word found
first, which is the lexicographically least), the per-depth visited-node
counts, and a truncation flag for budget exhaustion. Admissibility means the
non-computational entry has magnitude 1 within the given tolerance. Node
budgets are enforced at node granularity by the jit kernel and at batch
granularity by the numpy twin, so the partial results of a truncated run may
differ between the two; completed runs agree.
"""

from __future__ import annotations

import os
import warnings

import numpy as np

SQ2 = np.sqrt(2.0)
Q_BELL = np.array([
    [1, 0, 0, 1j],
    [0, 1j, 1, 0],
    [0, 1j, -1, 0],
    [1, 0, 0, -1j],
], dtype=np.complex128) / SQ2
QH_BELL = np.ascontiguousarray(Q_BELL.conj().T)

KERNEL_ENV = "BRAIDSYNTH_KERNEL"

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    _HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        if args and callable(args[0]):
            return args[0]
        return wrap


@njit(cache=True, nogil=True)
def _det4(a):
    d = 0j
    r0 = a[0]
    for c0 in range(4):
        cols = np.empty(3, np.int64)
        k = 0
        for c in range(4):
            if c != c0:
                cols[k] = c
                k += 1
        m = (a[1, cols[0]] * (a[2, cols[1]] * a[3, cols[2]] - a[2, cols[2]] * a[3, cols[1]])
             - a[1, cols[1]] * (a[2, cols[0]] * a[3, cols[2]] - a[2, cols[2]] * a[3, cols[0]])
             + a[1, cols[2]] * (a[2, cols[0]] * a[3, cols[1]] - a[2, cols[1]] * a[3, cols[0]]))
        sign = 1.0 if c0 % 2 == 0 else -1.0
        d += sign * r0[c0] * m
    return d


@njit(cache=True, nogil=True)
def _d_cnot(u, q, qh):
    a = np.ascontiguousarray(u[1:, 1:])
    det = _det4(a)
    ub = (qh @ a) @ q
    m = ub.T @ ub
    trm = m[0, 0] + m[1, 1] + m[2, 2] + m[3, 3]
    trm2 = 0j
    for i in range(4):
        for j in range(4):
            trm2 += m[i, j] * m[j, i]
    g12 = trm * trm / (16.0 * det)
    g3 = (trm * trm - trm2) / (4.0 * det)
    dg3 = g3 - 1.0
    return (g12.real * g12.real + g12.imag * g12.imag
            + dg3.real * dg3.real + dg3.imag * dg3.imag)


@njit(cache=True, nogil=True)
def _insert_slot(dvec, wmat, dist, word, wlen):
    k = dvec.shape[0]
    if not (dist < dvec[k - 1]):
        return
    j = k - 1
    while j > 0 and dist < dvec[j - 1]:
        dvec[j] = dvec[j - 1]
        wmat[j] = wmat[j - 1]
        j -= 1
    dvec[j] = dist
    wmat[j, :] = -1
    for t in range(wlen):
        wmat[j, t] = word[t]


@njit(cache=True, nogil=True)
def _scan_cnot_jit(gens, length, inv_pair, m11_tol, k, prefix, max_nodes,
                   q, qh):
    a = gens.shape[0]
    best_d = np.full((length + 1, k), np.inf)
    best_w = np.full((length + 1, k, length), -1, np.int64)
    counts = np.zeros(length + 1, np.int64)
    ustk = np.empty((length + 1, 5, 5), np.complex128)
    ustk[0] = np.eye(5, dtype=np.complex128)
    idx = np.full(length, -1, np.int64)
    total = 0

    p = prefix.shape[0]
    for d in range(p):
        i = prefix[d]
        ustk[d + 1] = ustk[d] @ gens[i]
        idx[d] = i
        counts[d + 1] += 1
        total += 1
        u00 = ustk[d + 1, 0, 0]
        if abs(np.sqrt(u00.real * u00.real + u00.imag * u00.imag) - 1.0) <= m11_tol:
            dist = _d_cnot(ustk[d + 1], q, qh)
            _insert_slot(best_d[d + 1], best_w[d + 1], dist, idx, d + 1)
    if p >= length:
        return best_d, best_w, counts, False

    pos = p
    idx[pos] = -1
    while pos >= p:
        idx[pos] += 1
        if idx[pos] == a:
            idx[pos] = -1
            pos -= 1
            continue
        i = idx[pos]
        if pos > 0 and inv_pair[idx[pos - 1]] == i:
            continue
        if total >= max_nodes:
            return best_d, best_w, counts, True
        ustk[pos + 1] = ustk[pos] @ gens[i]
        d = pos + 1
        counts[d] += 1
        total += 1
        u00 = ustk[d, 0, 0]
        if abs(np.sqrt(u00.real * u00.real + u00.imag * u00.imag) - 1.0) <= m11_tol:
            dist = _d_cnot(ustk[d], q, qh)
            _insert_slot(best_d[d], best_w[d], dist, idx, d)
        if d < length:
            pos += 1
    return best_d, best_w, counts, False


def scan_cnot_numba(gens, length, inv_pair, m11_tol, k, prefix, max_nodes):
    if prefix.shape[0] > length:
        raise ValueError("prefix word longer than the scan length")
    return _scan_cnot_jit(
        np.ascontiguousarray(gens), length, inv_pair, m11_tol, k,
        prefix, max_nodes, Q_BELL, QH_BELL)


def d_cnot_batch(a_stack: np.ndarray) -> np.ndarray:
    """Vectorized controlled-not class distance for a (n, 4, 4) stack."""
    a = a_stack
    det = np.zeros(a.shape[0], np.complex128)
    cols = (0, 1, 2, 3)
    for c0 in cols:
        c1, c2, c3 = (c for c in cols if c != c0)
        m = (a[:, 1, c1] * (a[:, 2, c2] * a[:, 3, c3] - a[:, 2, c3] * a[:, 3, c2])
             - a[:, 1, c2] * (a[:, 2, c1] * a[:, 3, c3] - a[:, 2, c3] * a[:, 3, c1])
             + a[:, 1, c3] * (a[:, 2, c1] * a[:, 3, c2] - a[:, 2, c2] * a[:, 3, c1]))
        sign = 1.0 if c0 % 2 == 0 else -1.0
        det = det + sign * a[:, 0, c0] * m
    ub = np.matmul(np.matmul(QH_BELL, a), Q_BELL)
    m = np.matmul(ub.transpose(0, 2, 1), ub)
    trm = ((m[:, 0, 0] + m[:, 1, 1]) + m[:, 2, 2]) + m[:, 3, 3]
    trm2 = np.zeros(a.shape[0], np.complex128)
    for i in range(4):
        for j in range(4):
            trm2 = trm2 + m[:, i, j] * m[:, j, i]
    g12 = trm * trm / (16.0 * det)
    g3 = (trm * trm - trm2) / (4.0 * det)
    dg3 = g3 - 1.0
    return (g12.real * g12.real + g12.imag * g12.imag
            + dg3.real * dg3.real + dg3.imag * dg3.imag)


def _insert_py(best_d, best_w, depth, dist, word):
    dvec, wmat = best_d[depth], best_w[depth]
    k = dvec.shape[0]
    if not (dist < dvec[k - 1]):
        return
    j = k - 1
    while j > 0 and dist < dvec[j - 1]:
        dvec[j] = dvec[j - 1]
        wmat[j] = wmat[j - 1]
        j -= 1
    dvec[j] = dist
    wmat[j, :] = -1
    wmat[j, :len(word)] = word


def scan_cnot_numpy(gens, length, inv_pair, m11_tol, k, prefix, max_nodes):
    """Batched twin of the jit kernel with identical result semantics."""
    if prefix.shape[0] > length:
        raise ValueError("prefix word longer than the scan length")
    a = gens.shape[0]
    best_d = np.full((length + 1, k), np.inf)
    best_w = np.full((length + 1, k, length), -1, np.int64)
    counts = np.zeros(length + 1, np.int64)
    allowed = np.stack([
        np.array([i for i in range(a) if inv_pair[l] != i], np.int64)
        for l in range(a)
    ])
    branching = allowed.shape[1]
    batch_depth = 4 if branching <= 5 else 3
    state = {"total": 0}

    def visit(u, depth, word):
        counts[depth] += 1
        state["total"] += 1
        u00 = u[0, 0]
        if abs(np.sqrt(u00.real * u00.real + u00.imag * u00.imag) - 1.0) <= m11_tol:
            dist = float(d_cnot_batch(u[None, 1:, 1:])[0])
            _insert_py(best_d, best_w, depth, dist, word)

    def batch_below(u0, depth0, word0):
        cur_u = u0[None]
        cur_last = np.array([word0[-1]], np.int64)
        cur_words = np.empty((1, 0), np.int64)
        base = np.array(word0, np.int64)
        for d in range(depth0 + 1, length + 1):
            ch = allowed[cur_last]
            m, b = ch.shape
            if state["total"] + m * b > max_nodes:
                return True
            new_u = np.matmul(cur_u[:, None], gens[ch]).reshape(m * b, 5, 5)
            cur_words = np.concatenate(
                [np.repeat(cur_words, b, axis=0), ch.reshape(-1, 1)], axis=1)
            counts[d] += m * b
            state["total"] += m * b
            u00 = new_u[:, 0, 0]
            adm = np.abs(np.sqrt(u00.real * u00.real + u00.imag * u00.imag)
                         - 1.0) <= m11_tol
            if adm.any():
                sel = np.nonzero(adm)[0]
                dists = d_cnot_batch(new_u[sel][:, 1:, 1:])
                order = np.argsort(dists, kind="stable")[:k]
                for oi in order:
                    full = np.concatenate([base, cur_words[sel[oi]]])
                    _insert_py(best_d, best_w, d, float(dists[oi]), full)
            cur_u = new_u
            cur_last = ch.ravel()
        return False

    p = prefix.shape[0]
    ustk = np.empty((length + 1, 5, 5), np.complex128)
    ustk[0] = np.eye(5, dtype=np.complex128)
    idx = np.full(length, -1, np.int64)
    for d in range(p):
        idx[d] = prefix[d]
        ustk[d + 1] = ustk[d] @ gens[prefix[d]]
        visit(ustk[d + 1], d + 1, idx[:d + 1])
    if p >= length:
        return best_d, best_w, counts, False

    cutoff = max(p, length - batch_depth)
    pos = p
    idx[pos] = -1
    truncated = False
    while pos >= p and not truncated:
        idx[pos] += 1
        if idx[pos] == a:
            idx[pos] = -1
            pos -= 1
            continue
        i = idx[pos]
        if pos > 0 and inv_pair[idx[pos - 1]] == i:
            continue
        if state["total"] >= max_nodes:
            truncated = True
            break
        ustk[pos + 1] = ustk[pos] @ gens[i]
        d = pos + 1
        visit(ustk[d], d, idx[:d])
        if d < length:
            if d == cutoff:
                truncated = batch_below(ustk[d], d, idx[:d])
            else:
                pos += 1
    return best_d, best_w, counts, truncated


def available_kernels():
    return ("numba", "numpy") if _HAVE_NUMBA else ("numpy",)


def get_scan(name: str | None = None):
    """Kernel selected by argument or the BRAIDSYNTH_KERNEL variable."""
    name = name or os.environ.get(KERNEL_ENV, "numba")
    if name == "numba":
        if _HAVE_NUMBA:
            return scan_cnot_numba
        warnings.warn("numba unavailable; falling back to the numpy kernel")
        return scan_cnot_numpy
    if name == "numpy":
        return scan_cnot_numpy
    raise ValueError(f"unknown kernel {name!r} (use 'numba' or 'numpy')")


def indices_to_signed(row, n_plain: int):
    """Stacked-generator indices to signed letters; stops at padding (-1)."""
    signed = []
    for v in row:
        if v < 0:
            break
        v = int(v)
        signed.append(v + 1 if v < n_plain else -(v - n_plain + 1))
    return tuple(signed)


def stack_with_inverses(gens: np.ndarray, use_inverses: bool):
    """Generator stack plus optional inverses and the inverse-pair table."""
    gens = np.ascontiguousarray(gens.astype(np.complex128))
    a = gens.shape[0]
    if use_inverses:
        inv = np.ascontiguousarray(gens.conj().transpose(0, 2, 1))
        stacked = np.ascontiguousarray(np.concatenate([gens, inv]))
        inv_pair = np.array([i + a for i in range(a)] + list(range(a)), np.int64)
        return stacked, inv_pair
    return gens, np.full(a, -1, np.int64)
