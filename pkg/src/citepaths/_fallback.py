"""Pure numpy versions of the compiled kernels in ``_kernels.pyx``.

``threads`` is accepted for signature compatibility and ignored.
"""
import numpy as np


def _row_ids(indptr):
    n = len(indptr) - 1
    return np.repeat(np.arange(n, dtype=np.int64), np.diff(indptr))


def pull_sum(indptr, indices, x, out, threads=1):
    # bincount accumulates in storage order, like the compiled loop
    n = len(indptr) - 1
    out[:] = np.bincount(_row_ids(indptr), weights=x[indices], minlength=n)


def pull_weighted(indptr, indices, weights, x, out, threads=1):
    n = len(indptr) - 1
    out[:] = np.bincount(_row_ids(indptr), weights=weights * x[indices], minlength=n)


def radix_argsort_pairs(primary, secondary, n):
    return np.lexsort((secondary, primary)).astype(np.int64)


def count_inversions(y):
    """Number of pairs i < j with y[i] > y[j], by bottom-up merge sort."""
    src = list(y)
    n = len(src)
    swaps = 0
    width = 1
    while width < n:
        dst = []
        for lo in range(0, n, 2 * width):
            left = src[lo:lo + width]
            right = src[lo + width:lo + 2 * width]
            a = b = 0
            while a < len(left) and b < len(right):
                if right[b] < left[a]:
                    dst.append(right[b])
                    swaps += len(left) - a
                    b += 1
                else:
                    dst.append(left[a])
                    a += 1
            dst.extend(left[a:])
            dst.extend(right[b:])
        src = dst
        width *= 2
    return swaps
