"""Packed Boolean kernels and tropical products."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hsub.matrices import (BoolMatrix, bool_product, count_product,
                           max_plus_product, min_plus_product,
                           naive_bool_product, parse_matrix, serialize_matrix,
                           set_threads)
from hsub.oracle import oracle_max_plus, oracle_min_plus


def rand_bool(r, c, seed):
    rng = np.random.Generator(np.random.PCG64(seed))
    return rng.random((r, c)) < 0.5


def test_bool_matrix_round_trip():
    d = rand_bool(5, 70, 0)
    m = BoolMatrix.from_dense(d)
    assert (m.dense() == d).all()
    assert (m.rows, m.cols) == (5, 70)
    assert m == BoolMatrix.from_dense(d)


@pytest.mark.parametrize("shape", [(1, 1, 1), (7, 13, 5), (16, 64, 16),
                                   (20, 65, 3), (8, 128, 8)])
def test_count_product_matches_naive(shape):
    n1, n2, n3 = shape
    a, b = rand_bool(n1, n2, 1), rand_bool(n2, n3, 2)
    expect = (a.astype(np.int64) @ b.astype(np.int64))
    assert (count_product(a, b) == expect).all()
    # BoolMatrix input is accepted too
    assert (count_product(BoolMatrix.from_dense(a), b) == expect).all()


def test_bool_product_matches_naive():
    for seed in range(5):
        a, b = rand_bool(9, 33, seed), rand_bool(33, 12, seed + 100)
        assert (bool_product(a, b).dense() == naive_bool_product(a, b)).all()


def test_inner_dimension_checked():
    with pytest.raises(ValueError):
        count_product(rand_bool(3, 4, 0), rand_bool(5, 3, 1))


def test_empty_dimensions():
    a = np.zeros((3, 0), dtype=bool)
    b = np.zeros((0, 2), dtype=bool)
    assert count_product(a, b).shape == (3, 2)
    assert not count_product(a, b).any()


def tropical_case(seed, kind):
    rng = np.random.Generator(np.random.PCG64(seed))
    a = rng.integers(-20, 20, (6, 7)).astype(float)
    b = rng.integers(-20, 20, (7, 5)).astype(float)
    good = np.inf if kind == "min" else -np.inf
    a[rng.random((6, 7)) < 0.15] = good
    b[rng.random((7, 5)) < 0.15] = good
    return a, b


def test_min_plus_matches_oracle():
    for seed in range(8):
        a, b = tropical_case(seed, "min")
        assert (min_plus_product(a, b) == oracle_min_plus(a, b)).all()


def test_max_plus_matches_oracle():
    for seed in range(8):
        a, b = tropical_case(seed, "max")
        assert (max_plus_product(a, b) == oracle_max_plus(a, b)).all()


def test_tropical_rejects_wrong_signed_infinity():
    a = np.zeros((2, 2))
    bad = a.copy()
    bad[0, 0] = -np.inf
    with pytest.raises(ValueError):
        min_plus_product(bad, a)
    bad[0, 0] = np.inf
    with pytest.raises(ValueError):
        max_plus_product(bad, a)
    bad[0, 0] = np.nan
    with pytest.raises(ValueError):
        min_plus_product(bad, a)


def test_threads_do_not_change_results():
    a, b = rand_bool(40, 90, 3), rand_bool(90, 30, 4)
    base = count_product(a, b)
    try:
        set_threads(4)
        assert (count_product(a, b) == base).all()
        assert (bool_product(a, b).dense() == bool_product(a, b).dense()).all()
    finally:
        set_threads(1)


def test_parse_serialize_round_trip():
    m = np.array([[1.5, -2.0, np.inf], [0.0, 3.25, -0.125]])
    again = parse_matrix(serialize_matrix(m))
    assert (again == m).all()


@pytest.mark.parametrize("text", ["", "m 2 2 1 2 3", "m -1 2", "m 2 2 1 2 3 x"])
def test_parse_matrix_rejects(text):
    with pytest.raises(ValueError):
        parse_matrix(text)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 12), st.integers(1, 80), st.integers(1, 12),
       st.integers(0, 10 ** 6))
def test_count_product_property(n1, n2, n3, seed):
    a, b = rand_bool(n1, n2, seed), rand_bool(n2, n3, seed + 1)
    got = count_product(a, b)
    assert (got == a.astype(np.int64) @ b.astype(np.int64)).all()
    assert got.max(initial=0) <= n2
