# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled brute-force kernel for sup_x |Δ_h^M f(x)| over all grid shifts.

The accumulation order matches the numpy fallback term for term, so both
backends return identical bits.
"""
import numpy as np
from cython.parallel import prange

from libc.math cimport fabs

DEF BLOCK = 2048


cdef double _sup_one_shift(const double[::1] f, const double[::1] coef, int order,
                           Py_ssize_t n, Py_ssize_t h, bint periodic) noexcept nogil:
    cdef double buf[BLOCK]
    cdef const double* src = &f[0]
    cdef Py_ssize_t start, width, i, m, off, split
    cdef double c, v
    cdef double b0 = 0.0, b1 = 0.0, b2 = 0.0, b3 = 0.0
    cdef double last = f[n - 1]
    for start in range(0, n, BLOCK):
        width = BLOCK if start + BLOCK <= n else n - start
        c = coef[0]
        for i in range(width):
            buf[i] = src[start + i] * c
        for m in range(1, order + 1):
            c = coef[m]
            off = m * h
            # i < split reads inside the window, the rest wraps or clamps
            split = n - off - start
            if split < 0:
                split = 0
            elif split > width:
                split = width
            for i in range(split):
                buf[i] += c * src[start + i + off]
            if periodic:
                for i in range(split, width):
                    buf[i] += c * src[start + i + off - n]
            else:
                for i in range(split, width):
                    buf[i] += c * last
        # four independent running maxima let the compiler keep vector lanes
        i = 0
        while i + 4 <= width:
            v = fabs(buf[i])
            b0 = v if v > b0 else b0
            v = fabs(buf[i + 1])
            b1 = v if v > b1 else b1
            v = fabs(buf[i + 2])
            b2 = v if v > b2 else b2
            v = fabs(buf[i + 3])
            b3 = v if v > b3 else b3
            i += 4
        while i < width:
            v = fabs(buf[i])
            b0 = v if v > b0 else b0
            i += 1
    b0 = b0 if b0 > b1 else b1
    b2 = b2 if b2 > b3 else b3
    return b0 if b0 > b2 else b2


def sup_abs_differences(const double[::1] f, const double[::1] coef, Py_ssize_t h_max,
                        bint periodic, int num_threads=1):
    """Return ``D[h-1] = max_x |Σ_m coef[m] f(x + m h)|`` for ``h = 1..h_max``.

    Each shift is handled by one thread, so the result does not depend on the
    thread count.
    """
    cdef Py_ssize_t n = f.shape[0]
    cdef int order = coef.shape[0] - 1
    out_arr = np.zeros(h_max, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t h
    if num_threads < 1:
        num_threads = 1
    for h in prange(1, h_max + 1, nogil=True, num_threads=num_threads, schedule="dynamic"):
        out[h - 1] = _sup_one_shift(f, coef, order, n, h, periodic)
    return out_arr
