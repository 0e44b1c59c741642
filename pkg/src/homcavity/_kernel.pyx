# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled pruned Gaussian pair sum (see ``_kernel_py`` for the reference)."""
import numpy as np

from libc.math cimport exp, ceil, floor, fabs


def pair_envelope_sum(wa, double a0, double ha, wb, double b0, double hb,
                      offsets, double dw, double cutoff):
    cdef double[::1] a = np.ascontiguousarray(wa, dtype=np.float64)
    cdef double[::1] b = np.ascontiguousarray(wb, dtype=np.float64)
    cdef double[::1] off = np.ascontiguousarray(offsets, dtype=np.float64)
    cdef Py_ssize_t na = a.shape[0], nb = b.shape[0], nk = off.shape[0]
    out_arr = np.zeros(nk, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i, j, k, lo, hi
    cdef double target, x, inner, total, flo, fhi
    cdef double dw2 = dw * dw
    if na == 0 or nb == 0:
        return out_arr
    for k in range(nk):
        total = 0.0
        for j in range(nb):
            target = b0 + hb * j - off[k]
            if ha > 0:
                flo = ceil((target - cutoff - a0) / ha)
                fhi = floor((target + cutoff - a0) / ha)
                if fhi < 0 or flo > na - 1:
                    continue
                lo = 0 if flo < 0 else <Py_ssize_t>flo
                hi = na - 1 if fhi > na - 1 else <Py_ssize_t>fhi
            else:
                if fabs(a0 - target) > cutoff:
                    continue
                lo = 0
                hi = na - 1
            inner = 0.0
            for i in range(lo, hi + 1):
                x = a0 + ha * i - target
                inner += a[i] * exp(-dw2 * x * x)
            total += b[j] * inner
        out[k] = total
    return out_arr
