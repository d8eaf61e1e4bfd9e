import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mimox.numerics import (
    InvalidInputError,
    TolerancePolicy,
    column_space_basis,
    format_rational,
    least_squares_solve,
    left_null_space_basis,
    min_singular_value,
    null_space_basis,
    numerical_rank,
    parse_rational,
    rational_min,
    subspace_intersection,
)


def rank_by_minors(a):
    """Independent rank oracle: largest k with a nonzero k x k minor.

    Only usable on small integer matrices, which is exactly what the tests
    feed it.
    """
    a = np.asarray(a, dtype=object)
    m, n = a.shape
    for k in range(min(m, n), 0, -1):
        for rows in itertools.combinations(range(m), k):
            for cols in itertools.combinations(range(n), k):
                sub = [[Fraction(int(a[r, c])) for c in cols] for r in rows]
                if exact_det(sub) != 0:
                    return k
    return 0


def exact_det(rows):
    """Fraction-exact determinant by Laplace expansion (tiny matrices only)."""
    n = len(rows)
    if n == 1:
        return rows[0][0]
    total = Fraction(0)
    for j in range(n):
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        sign = -1 if j % 2 else 1
        total += sign * rows[0][j] * exact_det(minor)
    return total


INT_MATRICES = [
    np.array([[1, 0], [0, 1]]),
    np.array([[1, 2], [2, 4]]),
    np.array([[0, 0], [0, 0]]),
    np.array([[1, 2, 3], [4, 5, 6], [7, 8, 9]]),
    np.array([[2, 0, 1], [0, 3, 1]]),
    np.array([[1], [2], [3]]),
    np.array([[5]]),
]


@pytest.mark.parametrize("a", INT_MATRICES, ids=range(len(INT_MATRICES)))
def test_rank_matches_minor_oracle(a):
    assert numerical_rank(a) == rank_by_minors(a)


@given(st.integers(1, 4), st.integers(1, 4), st.integers(0, 400))
@settings(max_examples=60, deadline=None)
def test_rank_matches_minor_oracle_random(m, n, seed):
    rng = np.random.default_rng(seed)
    a = rng.integers(-3, 4, size=(m, n))
    assert numerical_rank(a) == rank_by_minors(a)


@given(st.integers(1, 6), st.integers(1, 6), st.integers(0, 1000))
@settings(max_examples=60, deadline=None)
def test_rank_nullity(m, n, seed):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((m, n)) @ np.diag(rng.integers(0, 2, size=n))
    r = numerical_rank(a)
    ns = null_space_basis(a)
    assert r + ns.shape[1] == n
    if ns.shape[1]:
        assert np.max(np.abs(a @ ns)) < 1e-8
        assert np.allclose(ns.T @ ns, np.eye(ns.shape[1]), atol=1e-10)


def test_column_space_basis_spans():
    rng = np.random.default_rng(3)
    a = rng.standard_normal((6, 3)) @ rng.standard_normal((3, 5))
    q = column_space_basis(a)
    assert q.shape == (6, 3)
    # every column of a lies in span(q)
    proj = q @ (q.T @ a)
    assert np.max(np.abs(proj - a)) < 1e-10


def test_left_null_space():
    rng = np.random.default_rng(4)
    a = rng.standard_normal((5, 2))
    q = left_null_space_basis(a)
    assert q.shape == (5, 3)
    assert np.max(np.abs(q.T @ a)) < 1e-10


def test_zero_and_empty_shapes():
    assert numerical_rank(np.zeros((3, 3))) == 0
    assert null_space_basis(np.zeros((3, 3))).shape == (3, 3)
    assert numerical_rank(np.zeros((0, 4))) == 0
    assert null_space_basis(np.zeros((0, 4))).shape == (4, 4)
    assert column_space_basis(np.zeros((4, 0))).shape == (4, 0)


def intersection_dim_oracle(qa, qb):
    # dim(A) + dim(B) - dim(A + B), with the sum read off a stacked rank
    return qa.shape[1] + qb.shape[1] - numerical_rank(np.hstack([qa, qb]))


@given(st.integers(0, 1000))
@settings(max_examples=40, deadline=None)
def test_intersection_dim_matches_oracle(seed):
    rng = np.random.default_rng(seed)
    n = 6
    shared = column_space_basis(rng.standard_normal((n, 2)))
    a_extra = rng.standard_normal((n, 2))
    b_extra = rng.standard_normal((n, 1))
    qa = column_space_basis(np.hstack([shared, a_extra]))
    qb = column_space_basis(np.hstack([shared, b_extra]))
    inter = subspace_intersection(qa, qb)
    assert inter.shape[1] == intersection_dim_oracle(qa, qb)
    if inter.shape[1]:
        # each intersection direction sits in both spans
        for q in (qa, qb):
            proj = q @ (q.T @ inter)
            assert np.max(np.abs(proj - inter)) < 1e-7


def test_intersection_rejects_non_orthonormal():
    a = np.array([[1.0, 1.0], [0.0, 1.0], [0.0, 0.0]])
    q = np.eye(3)[:, :2]
    with pytest.raises(InvalidInputError):
        subspace_intersection(a, q)


def test_intersection_disjoint():
    qa = np.eye(4)[:, :2]
    qb = np.eye(4)[:, 2:]
    assert subspace_intersection(qa, qb).shape == (4, 0)


def test_least_squares_consistent_system():
    rng = np.random.default_rng(7)
    a = rng.standard_normal((5, 3))
    x_true = rng.standard_normal(3)
    x = least_squares_solve(a, a @ x_true)
    assert np.max(np.abs(x - x_true)) < 1e-9


def test_least_squares_min_norm():
    # wide system: solution must be the minimum-norm one (row space)
    a = np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
    x = least_squares_solve(a, np.array([2.0, 3.0]))
    assert np.allclose(x, [2.0, 3.0, 0.0])


def test_min_singular_value():
    assert min_singular_value(np.eye(3)) == pytest.approx(1.0)
    with pytest.raises(InvalidInputError):
        min_singular_value(np.zeros((3, 0)))


def test_tolerance_policy_validation():
    with pytest.raises(InvalidInputError):
        TolerancePolicy(rank_rel_tol=0.0)
    with pytest.raises(InvalidInputError):
        TolerancePolicy(residual_tol=-1.0)


@given(st.fractions(min_value=-10, max_value=10), st.fractions(min_value=-10, max_value=10))
def test_rational_roundtrip_and_min(x, y):
    assert parse_rational(format_rational(x)) == x
    assert rational_min([x, y]) == min(x, y)


def test_parse_rational_rejects_garbage():
    with pytest.raises(InvalidInputError):
        parse_rational("three")
    with pytest.raises(InvalidInputError):
        parse_rational("1/0")


def test_format_rational():
    assert format_rational(Fraction(4, 2)) == "2"
    assert format_rational(Fraction(7, 3)) == "7/3"
    assert format_rational(Fraction(-1, 2)) == "-1/2"
