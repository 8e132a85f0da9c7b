"""Numpy versions of the scans in ``_kernels.pyx``.

These also serve object arrays of unbounded ints, which the compiled path
cannot take.
"""
import numpy as np


def count_masked(values, mask, pivot):
    sub = values[mask.view(bool)]
    return len(sub), int(np.count_nonzero(sub == pivot)), int(np.count_nonzero(sub > pivot))


def count_indexed(values, idx, lo, hi, pivot):
    sub = values[idx[lo:hi]]
    return int(np.count_nonzero(sub == pivot)), int(np.count_nonzero(sub > pivot))


def count_above(values, pivot):
    return int(np.count_nonzero(values > pivot))


def count_bits(values, bits, skip, pivot):
    mask = np.unpackbits(bits, count=len(values))
    mask[skip] = 0
    return count_masked(values, mask, pivot)
