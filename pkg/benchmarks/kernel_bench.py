"""Timing comparison of the two scan kernels on identical workloads.

Runs the compiled kernel and the pure-numpy fallback over the same
exhaustive CNOT-class scans, reports node throughput for each, and
checks that the per-length minima agree. Invoke directly:

    python3 benchmarks/kernel_bench.py [--max-len-plain 9] [--max-len-inv 6]
"""

import argparse
import time

import numpy as np

from braidsynth.backends import Backend
from braidsynth.ebm import TWO_QUBIT, ebm_set
from braidsynth.kernels import scan_cnot_numba, scan_cnot_numpy, stack_with_inverses
from braidsynth.search import LEAKAGE_TOL


def run_scan(scan, gens, inv_pair, max_len):
    """One scan per first letter, as the search partitions the work."""
    alphabet = gens.shape[0]
    start = time.perf_counter()
    nodes = 0
    minima = {}
    for first in range(alphabet):
        best_d, _, counts, _ = scan(gens, max_len, inv_pair, LEAKAGE_TOL, 1,
                                    np.array([first], np.int64), 10**12)
        nodes += int(counts.sum())
        for length in range(1, max_len + 1):
            if np.isfinite(best_d[length, 0]):
                prev = minima.get(length, np.inf)
                minima[length] = min(prev, float(best_d[length, 0]))
    elapsed = time.perf_counter() - start
    return minima, nodes, elapsed


def bench(model, use_inverses, max_len):
    ebms = ebm_set(model, TWO_QUBIT, Backend.native64())
    gens, inv_pair = stack_with_inverses(ebms.numpy_generators(), use_inverses)

    # warm-up outside the timed region so jit compilation is not billed
    scan_cnot_numba(gens, 2, inv_pair, LEAKAGE_TOL, 1,
                    np.array([0], np.int64), 10**6)

    label = "inverses" if use_inverses else "plain"
    results = {}
    for name, scan in (("numba", scan_cnot_numba), ("numpy", scan_cnot_numpy)):
        minima, nodes, elapsed = run_scan(scan, gens, inv_pair, max_len)
        rate = nodes / elapsed / 1e6
        print(f"{model} {label:8s} L<={max_len} {name:5s}: "
              f"{nodes:>10d} nodes in {elapsed:6.2f}s  ({rate:6.2f} Mnodes/s)")
        results[name] = minima
    agree = all(
        abs(results["numba"][length] - results["numpy"][length]) <= 1e-12
        for length in results["numba"])
    print(f"  per-length minima agree to 1e-12: {agree}")
    if not agree:
        raise SystemExit(1)
    return results


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--model", default="V113_3")
    parser.add_argument("--max-len-plain", type=int, default=9)
    parser.add_argument("--max-len-inv", type=int, default=6)
    args = parser.parse_args()

    bench(args.model, False, args.max_len_plain)
    bench(args.model, True, args.max_len_inv)


if __name__ == "__main__":
    main()
