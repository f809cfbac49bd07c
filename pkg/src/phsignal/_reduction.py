"""Bit-packed boundary-matrix reduction kernel.

Columns of one dimension block are reduced left to right over GF(2).
Each column is a bitset over the rows (the block one dimension down, in
filtration order); the pivot of a reduced column is its highest set
bit. The kernel releases the GIL so windows can be reduced on worker
threads concurrently.
"""

from __future__ import annotations

import numpy as np
from numba import njit

__all__ = ["reduce_block"]


@njit(cache=True, nogil=True, inline="always")
def _msb64(x):
    # position of the highest set bit of a non-zero uint64
    r = 0
    if x >= np.uint64(0x100000000):
        x >>= np.uint64(32)
        r += 32
    if x >= np.uint64(0x10000):
        x >>= np.uint64(16)
        r += 16
    if x >= np.uint64(0x100):
        x >>= np.uint64(8)
        r += 8
    if x >= np.uint64(0x10):
        x >>= np.uint64(4)
        r += 4
    if x >= np.uint64(0x4):
        x >>= np.uint64(2)
        r += 2
    if x >= np.uint64(0x2):
        r += 1
    return r


@njit(cache=True, nogil=True)
def _reduce_block_impl(faces, cleared, n_rows):
    n_cols = faces.shape[0]
    n_faces = faces.shape[1]
    words = (n_rows + 63) >> 6
    cols = np.zeros((n_cols, words), np.uint64)
    owner = np.full(n_rows, -1, np.int64)
    lows = np.full(n_cols, -1, np.int64)
    one = np.uint64(1)
    zero = np.uint64(0)
    for j in range(n_cols):
        if cleared[j]:
            continue
        low = -1
        for t in range(n_faces):
            r = faces[j, t]
            cols[j, r >> 6] ^= one << np.uint64(r & 63)
            if r > low:
                low = r
        while low >= 0:
            o = owner[low]
            if o < 0:
                owner[low] = j
                lows[j] = low
                break
            # owner columns never have bits above their pivot, so the
            # addition only touches words up to the current low
            wtop = (low >> 6) + 1
            for t in range(wtop):
                cols[j, t] ^= cols[o, t]
            low = -1
            for wi in range(wtop - 1, -1, -1):
                if cols[j, wi] != zero:
                    low = (wi << 6) + _msb64(cols[j, wi])
                    break
    return owner, lows


def reduce_block(faces: np.ndarray, cleared: np.ndarray, n_rows: int):
    """Reduce one dimension block; returns (owner-by-row, low-by-column).

    ``owner[r]`` is the column whose reduced pivot is row r (-1 if
    none); ``lows[j]`` is column j's pivot row (-1 if the column was
    cleared or reduced to zero).
    """
    if len(faces) == 0:
        return np.full(n_rows, -1, np.int64), np.empty(0, np.int64)
    return _reduce_block_impl(
        np.ascontiguousarray(faces, dtype=np.int32),
        np.ascontiguousarray(cleared, dtype=np.bool_),
        n_rows,
    )
