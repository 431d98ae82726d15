# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops.

Every function here has a numpy twin in :mod:`citepaths._fallback` with the
same signature and the same results (bit-identical for the integer kernels,
identical summation order for the float kernels).
"""
import numpy as np
cimport numpy as cnp
from cython.parallel cimport prange

cnp.import_array()

ctypedef cnp.int64_t i64
ctypedef cnp.int32_t i32


def pull_sum(const i64[::1] indptr, const i32[::1] indices,
             const double[::1] x, double[::1] out, int threads=1):
    """out[i] = sum(x[j] for j in indices[indptr[i]:indptr[i+1]]).

    Each row is summed sequentially in storage order, so the result does not
    depend on the number of threads.
    """
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef Py_ssize_t i
    cdef i64 k
    cdef double acc
    if threads < 1:
        threads = 1
    for i in prange(n, nogil=True, schedule="static", num_threads=threads):
        acc = 0.0
        for k in range(indptr[i], indptr[i + 1]):
            acc = acc + x[indices[k]]
        out[i] = acc


def pull_weighted(const i64[::1] indptr, const i32[::1] indices,
                  const double[::1] weights, const double[::1] x,
                  double[::1] out, int threads=1):
    """out[i] = sum(weights[k] * x[indices[k]]) over row i, in storage order."""
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef Py_ssize_t i
    cdef i64 k
    cdef double acc
    if threads < 1:
        threads = 1
    for i in prange(n, nogil=True, schedule="static", num_threads=threads):
        acc = 0.0
        for k in range(indptr[i], indptr[i + 1]):
            acc = acc + weights[k] * x[indices[k]]
        out[i] = acc


def radix_argsort_pairs(const i64[::1] primary, const i64[::1] secondary, i64 n):
    """Stable permutation ordering edges by (primary, secondary).

    Both keys must lie in ``[0, n)``. Two counting-sort passes, O(E + n).
    """
    cdef Py_ssize_t m = primary.shape[0]
    cdef Py_ssize_t i
    cdef i64 key, acc, c
    counts_arr = np.zeros(n + 1, dtype=np.int64)
    tmp_arr = np.empty(m, dtype=np.int64)
    perm_arr = np.empty(m, dtype=np.int64)
    cdef i64[::1] counts = counts_arr
    cdef i64[::1] tmp = tmp_arr
    cdef i64[::1] perm = perm_arr

    with nogil:
        # pass 1: by secondary key
        for i in range(m):
            counts[secondary[i] + 1] += 1
        acc = 0
        for i in range(n + 1):
            acc = acc + counts[i]
            counts[i] = acc
        for i in range(m):
            key = secondary[i]
            tmp[counts[key]] = i
            counts[key] += 1
        # pass 2: by primary key, stable over pass 1
        for i in range(n + 1):
            counts[i] = 0
        for i in range(m):
            counts[primary[i] + 1] += 1
        acc = 0
        for i in range(n + 1):
            acc = acc + counts[i]
            counts[i] = acc
        for i in range(m):
            c = tmp[i]
            key = primary[c]
            perm[counts[key]] = c
            counts[key] += 1
    return perm_arr


def count_inversions(const double[::1] y):
    """Number of pairs i < j with y[i] > y[j] (ties are not inversions)."""
    cdef Py_ssize_t n = y.shape[0]
    cdef Py_ssize_t width, lo, mid, hi, a, b, k
    cdef i64 swaps = 0
    buf_arr = np.array(y, dtype=np.float64, copy=True)
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] src = buf_arr
    cdef double[::1] dst = out_arr
    cdef double[::1] t

    width = 1
    with nogil:
        while width < n:
            lo = 0
            while lo < n:
                mid = lo + width
                if mid > n:
                    mid = n
                hi = lo + 2 * width
                if hi > n:
                    hi = n
                a = lo
                b = mid
                k = lo
                while a < mid and b < hi:
                    if src[b] < src[a]:
                        dst[k] = src[b]
                        swaps += mid - a
                        b += 1
                    else:
                        dst[k] = src[a]
                        a += 1
                    k += 1
                while a < mid:
                    dst[k] = src[a]
                    a += 1
                    k += 1
                while b < hi:
                    dst[k] = src[b]
                    b += 1
                    k += 1
                lo = hi
            t = src
            src = dst
            dst = t
            width *= 2
    return int(swaps)
