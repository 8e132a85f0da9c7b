# cython: boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled scans over int64 value arrays.

Each function returns plain Python ints and mirrors the numpy versions in
``_pykernels`` exactly.
"""
from libc.stdint cimport int64_t, uint8_t


def count_masked(const int64_t[::1] values, const uint8_t[::1] mask, int64_t pivot):
    """(size, ties, above) over the positions where ``mask`` is set."""
    cdef Py_ssize_t k, n = values.shape[0]
    cdef Py_ssize_t size = 0, ties = 0, above = 0
    cdef int64_t v
    for k in range(n):
        if mask[k]:
            size += 1
            v = values[k]
            if v == pivot:
                ties += 1
            elif v > pivot:
                above += 1
    return size, ties, above


def count_indexed(const int64_t[::1] values, const int64_t[::1] idx,
                  Py_ssize_t lo, Py_ssize_t hi, int64_t pivot):
    """(ties, above) over ``values[idx[lo:hi]]``."""
    cdef Py_ssize_t k
    cdef Py_ssize_t ties = 0, above = 0
    cdef int64_t v
    for k in range(lo, hi):
        v = values[idx[k]]
        if v == pivot:
            ties += 1
        elif v > pivot:
            above += 1
    return ties, above


def count_above(const int64_t[::1] values, int64_t pivot):
    cdef Py_ssize_t k, above = 0
    for k in range(values.shape[0]):
        if values[k] > pivot:
            above += 1
    return above


def count_bits(const int64_t[::1] values, const uint8_t[::1] bits, Py_ssize_t skip, int64_t pivot):
    """(size, ties, above) for the subset whose membership bits are packed MSB-first
    in ``bits`` (the layout of ``np.unpackbits``), with position ``skip`` left out."""
    cdef Py_ssize_t k, n = values.shape[0]
    cdef Py_ssize_t size = 0, ties = 0, above = 0
    cdef int64_t v
    cdef int bit
    # Branch-free: the membership bits are random, so branches would mispredict.
    for k in range(n):
        bit = (bits[k >> 3] >> (7 - (k & 7))) & 1
        bit &= k != skip
        v = values[k]
        size += bit
        ties += bit & (v == pivot)
        above += bit & (v > pivot)
    return size, ties, above
