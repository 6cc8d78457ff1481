# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; see _pykernels for the reference semantics."""
import numpy as np

from libc.math cimport frexp, ldexp, pow


cdef inline void _norm(double m, long e, double* om, long* oe) nogil:
    cdef int k
    cdef double f
    if m == 0.0:
        om[0] = 0.0
        oe[0] = 0
        return
    f = frexp(m, &k)
    om[0] = 2.0 * f
    oe[0] = e + k - 1


def h_complete_series(lam, long n):
    if n < 0:
        raise ValueError("degree must be non-negative")
    cdef const double[::1] lv = np.ascontiguousarray(lam, dtype=np.float64)
    cdef double[::1] mant = np.zeros(n + 1, dtype=np.float64)
    cdef long[::1] expo = np.zeros(n + 1, dtype=np.int64)
    cdef Py_ssize_t j, k
    cdef double lm, pm, cm, s
    cdef long le, pe, ce
    mant[0] = 1.0
    with nogil:
        for j in range(lv.shape[0]):
            if lv[j] <= 0.0:
                continue
            _norm(lv[j], 0, &lm, &le)
            for k in range(1, n + 1):
                pm = mant[k - 1]
                if pm == 0.0:
                    continue
                _norm(pm * lm, expo[k - 1] + le, &pm, &pe)
                cm = mant[k]
                if cm == 0.0:
                    mant[k] = pm
                    expo[k] = pe
                    continue
                ce = expo[k]
                if ce >= pe:
                    s = cm + ldexp(pm, <int>(pe - ce)) if ce - pe < 2000 else cm
                    _norm(s, ce, &mant[k], &expo[k])
                else:
                    s = pm + ldexp(cm, <int>(ce - pe)) if pe - ce < 2000 else pm
                    _norm(s, pe, &mant[k], &expo[k])
    return list(np.asarray(mant)), [int(e) for e in np.asarray(expo)]


cdef double _partition_sum(int remaining, int max_part, const double* p) nogil:
    # sum over partitions of ``remaining`` into parts <= max_part of
    # prod_k (p_k / k)^c_k / c_k!, i.e. the cycle-type class weights of S_n / n!
    cdef double total = 0.0, w
    cdef int k, c
    if remaining == 0:
        return 1.0
    for k in range(min(remaining, max_part), 0, -1):
        w = 1.0
        c = 1
        while c * k <= remaining:
            w *= p[k] / (k * c)
            total += w * _partition_sum(remaining - c * k, k - 1, p)
            c += 1
    return total


def power_sum_average(lam, long n):
    """(1/n!) sum over S_n of prod over cycles of p_len, summed by cycle type.

    A class with c_k cycles of length k has n! / prod(k^c_k c_k!) members,
    so no permutation is ever enumerated.
    """
    if n < 1 or n > 40:
        raise ValueError("power_sum_average supports 1 <= n <= 40")
    cdef const double[::1] lv = np.ascontiguousarray(lam, dtype=np.float64)
    cdef double p[41]
    cdef Py_ssize_t j
    cdef int ell
    cdef double total
    for ell in range(1, n + 1):
        p[ell] = 0.0
        for j in range(lv.shape[0]):
            p[ell] += pow(lv[j], ell)
    with nogil:
        total = _partition_sum(<int>n, <int>n, p)
    return total
