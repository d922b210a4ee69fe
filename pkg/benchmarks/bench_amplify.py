#!/usr/bin/env python3
"""Benchmark the compiled amplification kernel against the numpy fallback.

Both kernels evolve one amplitude per degeneracy class; this measures the
per-iteration loop cost on realistic chain-QUBO class tables at several
problem sizes, then cross-checks that the two backends agree bitwise-close.

Usage: python benchmarks/bench_amplify.py [--repeats N]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from ampboost import backend
from ampboost._kernels_py import amplify_classes as pure_amplify
from ampboost.engine import grover_iterations
from ampboost.problems import generate_linear_qubo
from ampboost.spectrum import enumerate_space, exact_ps

try:
    from ampboost import _kernels as compiled

    HAVE_COMPILED = True
except ImportError:
    compiled = None
    HAVE_COMPILED = False


def class_inputs(n: int, seed: int = 0):
    space = enumerate_space(generate_linear_qubo(n, seed=seed))
    classes = space.classes
    ps = exact_ps(space)
    phase = np.exp(1j * np.mod(ps * classes.values, 2 * np.pi))
    counts = classes.counts.astype(np.float64)
    return phase, counts, float(space.d)


def time_kernel(fn, phase, counts, d, k, repeats):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(phase.copy(), counts.copy(), d, k, None)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    print(f"selected backend: {backend.BACKEND}")
    print(f"{'n':>3} {'classes':>8} {'k':>6} {'pure (ms)':>10} "
          f"{'compiled (ms)':>14} {'speedup':>8}")
    for n in (12, 14, 16, 18):
        phase, counts, d = class_inputs(n)
        k = grover_iterations(int(d), 1)
        t_pure = time_kernel(pure_amplify, phase, counts, d, k, args.repeats)
        if HAVE_COMPILED:
            t_comp = time_kernel(compiled.amplify_classes, phase, counts, d, k,
                                 args.repeats)
            a, _ = compiled.amplify_classes(phase.copy(), counts.copy(), d, k, None)
            b, _ = pure_amplify(phase.copy(), counts.copy(), d, k, None)
            assert np.allclose(a, b, atol=1e-12), "backends disagree"
            print(f"{n:>3} {len(counts):>8} {k:>6} {t_pure * 1e3:>10.2f} "
                  f"{t_comp * 1e3:>14.2f} {t_pure / t_comp:>7.1f}x")
        else:
            print(f"{n:>3} {len(counts):>8} {k:>6} {t_pure * 1e3:>10.2f} "
                  f"{'n/a':>14} {'n/a':>8}")
    if not HAVE_COMPILED:
        print("compiled kernel unavailable; only the fallback was timed")


if __name__ == "__main__":
    main()
