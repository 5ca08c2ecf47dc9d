"""Throughput comparison of the compiled and pure-Python simulation kernels.

Usage: python3 benchmarks/bench_kernel.py [--cycles N] [--repeats K]

Runs the same workload (reference parameter set, optimal policy) through
opticbm._ckernel and opticbm._pykernel, checks that the outputs are
bit-identical, and reports cycles/second for each.
"""

import argparse
import time

import numpy as np

from opticbm import ModelParams, optimal_policy
from opticbm import _pykernel

try:
    from opticbm import _ckernel
except ImportError:
    _ckernel = None


def run(kernel, params, policy, cycles, seed):
    fail = np.zeros(cycles, dtype=np.int64)
    uso = np.zeros(cycles, dtype=np.int64)
    so = np.zeros(cycles, dtype=np.int64)
    hits = np.zeros(0, dtype=np.int64)
    probes = np.zeros(0, dtype=np.float64)
    start = time.perf_counter()
    kernel.run_cycles(params.mu1, params.mu2, params.lam, params.tau,
                      policy.uso_threshold, policy.replace_at_so,
                      seed, 0, cycles, 2, probes, fail, uso, so, hits)
    elapsed = time.perf_counter() - start
    return elapsed, (fail, uso, so)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--cycles", type=int, default=200_000)
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    params = ModelParams(1.0, 0.4, 0.5, 2.0, 15000.0, 4000.0, 10000.0)
    policy = optimal_policy(params).policy

    kernels = [("python", _pykernel)]
    if _ckernel is not None:
        kernels.append(("cython", _ckernel))
    else:
        print("compiled kernel not available; benchmarking the fallback only")

    results = {}
    outputs = {}
    for name, kernel in kernels:
        best = min(run(kernel, params, policy, args.cycles, args.seed)[0]
                   for _ in range(args.repeats))
        _, outputs[name] = run(kernel, params, policy, args.cycles, args.seed)
        results[name] = best
        print(f"{name:>8}: {args.cycles / best:>12,.0f} cycles/s "
              f"({best:.3f} s for {args.cycles:,} cycles)")

    if len(results) == 2:
        match = all((a == b).all() for a, b in zip(outputs["python"], outputs["cython"]))
        print(f"bit-identical outputs: {'yes' if match else 'NO'}")
        print(f"speedup: {results['python'] / results['cython']:.1f}x")


if __name__ == "__main__":
    main()
