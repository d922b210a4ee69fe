"""Pure-numpy fallback for the amplify-iteration hot loop.

Must stay semantically identical to the Cython kernel in _kernels.pyx;
the benchmark in benchmarks/bench_amplify.py compares the two.
"""

import numpy as np


def amplify_classes(phase, counts, d, k, tracked=None):
    n = phase.shape[0]
    a = np.full(n, 1.0 / np.sqrt(d), dtype=np.complex128)
    hist = None
    if tracked is not None:
        hist = np.empty((k + 1, len(tracked)), dtype=np.float64)
        hist[0] = np.abs(a[tracked]) ** 2
    for it in range(k):
        a *= phase
        mean = 2.0 * counts.dot(a) / d
        np.subtract(mean, a, out=a)
        if tracked is not None:
            hist[it + 1] = np.abs(a[tracked]) ** 2
    return a, hist
