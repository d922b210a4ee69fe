# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loop: k rounds of (phase multiply, weighted mean, reflect)
over degeneracy-class amplitudes.  Semantics must match _kernels_py exactly.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


cdef void _steps(double complex[::1] a, double complex[::1] phase,
                 double[::1] counts, double d, int k) noexcept:
    cdef Py_ssize_t n = a.shape[0]
    cdef double complex mean, av
    cdef Py_ssize_t it, c
    for it in range(k):
        mean = 0
        for c in range(n):
            av = a[c] * phase[c]
            a[c] = av
            mean = mean + counts[c] * av
        mean = 2.0 * mean / d
        for c in range(n):
            a[c] = mean - a[c]


def amplify_classes(phase, counts, double d, int k, tracked=None):
    """Evolve class amplitudes from uniform for k iterations.

    Returns (amps, history) where history is None unless tracked class ids
    are given, in which case it is a (k+1, len(tracked)) array of the
    per-state probability |a_c|^2 at each iteration (0 = before any round).
    """
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] a = np.full(
        phase.shape[0], 1.0 / np.sqrt(d), dtype=np.complex128
    )
    cdef double complex[::1] av_ = a
    cdef double complex[::1] ph_ = np.ascontiguousarray(phase, dtype=np.complex128)
    cdef double[::1] ct_ = np.ascontiguousarray(counts, dtype=np.float64)

    if tracked is None:
        _steps(av_, ph_, ct_, d, k)
        return a, None

    tracked = np.ascontiguousarray(tracked, dtype=np.int64)
    hist = np.empty((k + 1, len(tracked)), dtype=np.float64)
    hist[0] = np.abs(a[tracked]) ** 2
    for it in range(k):
        _steps(av_, ph_, ct_, d, 1)
        hist[it + 1] = np.abs(a[tracked]) ** 2
    return a, hist
