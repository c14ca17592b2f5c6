"""Bit-packed GF(2) matrices backed by uint64 words."""

from __future__ import annotations

import numpy as np

WORD = 64


def n_words(n_bits: int) -> int:
    return (n_bits + WORD - 1) // WORD


def zeros(n_rows: int, n_bits: int) -> np.ndarray:
    return np.zeros((n_rows, n_words(n_bits)), dtype=np.uint64)


def get_bit(row: np.ndarray, i: int) -> int:
    return int(row[i >> 6] >> np.uint64(i & 63)) & 1


def set_bit(row: np.ndarray, i: int, value: int = 1) -> None:
    mask = np.uint64(1) << np.uint64(i & 63)
    if value:
        row[i >> 6] |= mask
    else:
        row[i >> 6] &= ~mask


def from_bool(bits: np.ndarray) -> np.ndarray:
    """Pack a boolean (rows, cols) array into uint64 words, little-endian bits."""
    bits = np.asarray(bits, dtype=np.uint8)
    if bits.ndim == 1:
        bits = bits[None, :]
    n_rows, n_bits = bits.shape
    width = n_words(n_bits) * WORD
    padded = np.zeros((n_rows, width), dtype=np.uint8)
    padded[:, :n_bits] = bits
    packed = np.packbits(padded, axis=1, bitorder="little")
    return packed.view(np.uint64).copy()


def to_bool(mat: np.ndarray, n_bits: int) -> np.ndarray:
    """Unpack packed rows to a boolean (rows, n_bits) array."""
    as_bytes = np.ascontiguousarray(mat).view(np.uint8)
    bits = np.unpackbits(as_bytes, axis=1, bitorder="little")
    return bits[:, :n_bits].astype(bool)


def popcount_rows(mat: np.ndarray) -> np.ndarray:
    """Per-row number of set bits."""
    return np.bitwise_count(mat).sum(axis=1).astype(np.int64)


def parity_rows(mat: np.ndarray) -> np.ndarray:
    """Per-row parity of the set-bit count, as 0/1 uint8."""
    folded = np.bitwise_xor.reduce(mat, axis=1)
    return (np.bitwise_count(folded) & np.uint64(1)).astype(np.uint8)


def select_columns(mat: np.ndarray, cols: np.ndarray) -> np.ndarray:
    """Gather the given bit columns into a freshly packed matrix."""
    cols = np.asarray(cols, dtype=np.int64)
    words = cols >> 6
    shifts = (cols & 63).astype(np.uint64)
    bits = ((mat[:, words] >> shifts) & np.uint64(1)).astype(np.uint8)
    return from_bool(bits)


def rank(mat: np.ndarray, n_bits: int) -> int:
    """GF(2) rank via bit-parallel Gaussian elimination on a scratch copy."""
    work = mat.copy()
    n_rows = work.shape[0]
    r = 0
    for col in range(n_bits):
        if r == n_rows:
            break
        w, b = col >> 6, np.uint64(col & 63)
        col_bits = (work[r:, w] >> b) & np.uint64(1)
        hits = np.nonzero(col_bits)[0]
        if hits.size == 0:
            continue
        piv = r + int(hits[0])
        if piv != r:
            work[[r, piv]] = work[[piv, r]]
        below = (work[r + 1:, w] >> b) & np.uint64(1)
        targets = np.nonzero(below)[0]
        if targets.size:
            work[r + 1 + targets] ^= work[r]
        r += 1
    return r
