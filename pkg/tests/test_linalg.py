from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from homger.field import QQ, PrimeField
from homger.linalg import (
    Cancelled,
    from_rows,
    identity,
    invert,
    kernel_basis,
    mat_mul,
    mat_vec,
    rank,
    solve,
    transpose,
    zeros,
)


def test_rank_identity():
    assert rank(identity(QQ, 3)) == 3


def test_rank_zero_matrix():
    assert rank(zeros(QQ, 2, 2)) == 0


def test_rank_dependent_rows():
    # second row is twice the first, hand elimination leaves one pivot
    m = from_rows(QQ, [[1, 2], [2, 4]])
    assert rank(m) == 1


def test_kernel_identity_empty():
    assert kernel_basis(identity(QQ, 3)) == []


def test_kernel_zero_matrix_full():
    ker = kernel_basis(zeros(QQ, 2, 3))
    assert len(ker) == 3


def test_kernel_single_row():
    m = from_rows(QQ, [[1, 1]])
    ker = kernel_basis(m)
    assert len(ker) == 1
    (v,) = ker
    # spans {(t, -t)}
    assert v[0] == -v[1] and v[0] != 0


def test_solve_identity():
    b = [Fraction(3), Fraction(-1)]
    assert solve(identity(QQ, 2), b) == b


def test_solve_inconsistent():
    assert solve(zeros(QQ, 2, 2), [QQ.one(), QQ.zero()]) is None


def test_solve_scalar_division():
    assert solve(from_rows(QQ, [[2]]), [QQ.one()]) == [Fraction(1, 2)]


def test_solve_dimension_mismatch():
    with pytest.raises(ValueError):
        solve(identity(QQ, 2), [QQ.one()])


def test_prime_field_rank_and_solve():
    F = PrimeField(7)
    m = from_rows(F, [[F.scalar(2), F.scalar(1)], [F.scalar(4), F.scalar(2)]])
    assert rank(m) == 1
    x = solve(from_rows(F, [[F.scalar(3)]]), [F.scalar(1)])
    assert x is not None and (F.scalar(3) * x[0]) == 1


def test_invert_round_trip():
    m = from_rows(QQ, [[1, 2], [3, 5]])
    inv = invert(m)
    assert inv is not None
    assert mat_mul(m, inv) == identity(QQ, 2)
    assert invert(from_rows(QQ, [[1, 2], [2, 4]])) is None


def test_cancellation_hook_fires():
    m = from_rows(QQ, [[1, 2, 3], [4, 5, 6], [7, 8, 10]])
    calls = {"n": 0}

    def hook():
        calls["n"] += 1
        return calls["n"] > 1

    with pytest.raises(Cancelled):
        rank(m, should_cancel=hook)


@st.composite
def small_matrix(draw):
    rows = draw(st.integers(min_value=1, max_value=4))
    cols = draw(st.integers(min_value=1, max_value=4))
    ents = draw(
        st.lists(
            st.lists(
                st.fractions(
                    min_value=-4, max_value=4, max_denominator=3
                ),
                min_size=cols,
                max_size=cols,
            ),
            min_size=rows,
            max_size=rows,
        )
    )
    return from_rows(QQ, ents)


@settings(max_examples=60, derandomize=True)
@given(small_matrix())
def test_rank_nullity(m):
    # fraction-free rank vs Gauss-Jordan kernel: independent routes must agree
    assert rank(m) + len(kernel_basis(m)) == m.cols


@settings(max_examples=60, derandomize=True)
@given(small_matrix())
def test_rank_transpose(m):
    assert rank(m) == rank(transpose(m))


@settings(max_examples=60, derandomize=True)
@given(small_matrix())
def test_kernel_vectors_annihilate(m):
    for v in kernel_basis(m):
        assert all(c == 0 for c in mat_vec(m, v))


@settings(max_examples=40, derandomize=True)
@given(small_matrix())
def test_solve_exactness(m):
    # build a consistent rhs, then the returned x must reproduce it exactly
    x0 = [Fraction(i + 1, 2) for i in range(m.cols)]
    b = mat_vec(m, x0)
    x = solve(m, b)
    assert x is not None
    assert mat_vec(m, x) == b
