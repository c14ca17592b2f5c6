"""Packed GF(2) matrix helpers against naive boolean references."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mocsim import bitmat


def naive_rank_gf2(rows: np.ndarray) -> int:
    """Plain Gaussian elimination over GF(2) on a boolean matrix."""
    m = rows.astype(np.uint8).copy()
    rank = 0
    n_rows, n_cols = m.shape
    for col in range(n_cols):
        pivot = None
        for r in range(rank, n_rows):
            if m[r, col]:
                pivot = r
                break
        if pivot is None:
            continue
        m[[rank, pivot]] = m[[pivot, rank]]
        for r in range(n_rows):
            if r != rank and m[r, col]:
                m[r] ^= m[rank]
        rank += 1
    return rank


bool_matrix = st.integers(1, 5).flatmap(
    lambda rows: st.integers(1, 130).flatmap(
        lambda cols: st.lists(
            st.lists(st.booleans(), min_size=cols, max_size=cols),
            min_size=rows, max_size=rows,
        )
    )
)


@given(bool_matrix)
@settings(max_examples=60, deadline=None)
def test_rank_matches_naive(matrix):
    b = np.array(matrix, dtype=bool)
    packed = bitmat.from_bool(b)
    assert bitmat.rank(packed, b.shape[1]) == naive_rank_gf2(b)


@given(bool_matrix)
@settings(max_examples=60, deadline=None)
def test_pack_roundtrip(matrix):
    b = np.array(matrix, dtype=bool)
    assert np.array_equal(bitmat.to_bool(bitmat.from_bool(b), b.shape[1]), b)


@given(bool_matrix)
@settings(max_examples=60, deadline=None)
def test_popcount_and_parity(matrix):
    b = np.array(matrix, dtype=bool)
    packed = bitmat.from_bool(b)
    assert np.array_equal(bitmat.popcount_rows(packed), b.sum(axis=1))
    assert np.array_equal(bitmat.parity_rows(packed), b.sum(axis=1) % 2)


def test_select_columns():
    rng = np.random.default_rng(3)
    b = rng.random((6, 100)) < 0.5
    packed = bitmat.from_bool(b)
    cols = np.array([0, 17, 63, 64, 99])
    got = bitmat.select_columns(packed, cols)
    assert np.array_equal(bitmat.to_bool(got, cols.size), b[:, cols])


def test_bit_accessors():
    row = bitmat.zeros(1, 70)[0]
    assert not bitmat.get_bit(row, 69)
    bitmat.set_bit(row, 69)
    assert bitmat.get_bit(row, 69)
    assert not bitmat.get_bit(row, 68)


def test_rank_full_and_zero():
    eye = np.eye(64, dtype=bool)
    assert bitmat.rank(bitmat.from_bool(eye), 64) == 64
    assert bitmat.rank(bitmat.zeros(4, 64), 64) == 0


@pytest.mark.parametrize("n", [1, 63, 64, 65, 128, 129])
def test_n_words_boundaries(n):
    assert bitmat.n_words(n) == (n + 63) // 64
