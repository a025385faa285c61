"""
Test Quantum Determinants
=========================

det_q, Ferm(A), and the determinantal lemmas for right-quantum matrices.
"""

import random

import pytest
from sympy import Matrix

from src.coeffs import ONE, Q, ZERO, LaurentPoly
from src.ncpoly import MixedPoly, specialize_q1_commutative
from src.protocol import ArithMode
from src.qdet import (
    adjacent_swap_path,
    column_expansion_check,
    column_swap_check,
    equal_column_vanishing_check,
    ferm,
    generic_matrix,
    inversions,
    last_column_expansion,
    permutations_with_inversions,
    principal_subsets,
    qdet,
    subset_index,
    submatrix,
)
from src.relations import right_quantum_relations


def a(i, j, r=2):
    return MixedPoly.letter(r, i, j)


def test_qdet_rank_two():
    expected = a(1, 1) * a(2, 2) - (a(2, 1) * a(1, 2)).scale(Q ** -1)
    assert qdet(generic_matrix(2)) == expected


def test_qdet_rank_one_and_empty():
    A = generic_matrix(3)
    assert qdet(submatrix(A, [2], [3])) == a(2, 3, r=3)
    assert qdet(submatrix(A, [], [])) == MixedPoly.one(3)


def test_qdet_term_count():
    assert len(qdet(generic_matrix(3))) == 6
    assert len(qdet(generic_matrix(4))) == 24


def test_inversions():
    assert inversions((1, 2, 3)) == 0
    assert inversions((3, 2, 1)) == 3
    assert sum(1 for _ in permutations_with_inversions(3)) == 6


def test_ferm_rank_two():
    expected = (
        MixedPoly.one(2) - a(1, 1) - a(2, 2)
        + a(1, 1) * a(2, 2) - (a(2, 1) * a(1, 2)).scale(Q ** -1)
    )
    assert ferm(generic_matrix(2)) == expected


def test_ferm_rank_one():
    assert ferm(generic_matrix(1)) == MixedPoly.one(1) - MixedPoly.letter(1, 1, 1)


def test_subset_index_validation():
    assert subset_index([1, 3]) == (1, 3)
    with pytest.raises(ValueError):
        subset_index([3, 1])
    with pytest.raises(ValueError):
        subset_index([1, 1])
    with pytest.raises(ValueError):
        subset_index([0, 2], r=3)
    with pytest.raises(ValueError):
        submatrix(generic_matrix(3), [1, 2], [1])


def test_principal_subsets():
    assert list(principal_subsets(2)) == [(), (1,), (2,), (1, 2)]
    assert list(principal_subsets(3, 2)) == [(1, 2), (1, 3), (2, 3)]


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_column_expansion_is_exact(n):
    assert column_expansion_check(n)


def test_column_expansion_bounds():
    with pytest.raises(ValueError):
        column_expansion_check(5)


def test_last_column_expansion_rank_two():
    A = generic_matrix(2)
    expected = a(1, 1) * a(2, 2) - (a(2, 1) * a(1, 2)).scale(Q ** -1)
    assert last_column_expansion(A) == expected


def test_adjacent_swap_path():
    assert adjacent_swap_path(1, 2) == [1]
    assert adjacent_swap_path(1, 3) == [1, 2, 1]
    assert len(adjacent_swap_path(1, 4)) == 5
    with pytest.raises(ValueError):
        adjacent_swap_path(2, 2)


def test_column_swap_rank_two():
    outcome = column_swap_check(2, 1, 2, mode=ArithMode.EXACT)
    assert outcome
    assert outcome.info["exponent"] == 1


@pytest.mark.parametrize("i,j,exponent", [(1, 2, 1), (2, 3, 1), (1, 3, 3)])
def test_column_swap_rank_three(i, j, exponent):
    outcome = column_swap_check(3, i, j, right_quantum_relations(3))
    assert outcome.verdict
    assert outcome.info["exponent"] == exponent == 2 * (j - i) - 1
    components = {c.component for c in outcome.certificates}
    assert "composite" in components


def test_column_swap_fails_without_relations():
    """The swap identity genuinely needs the ideal: det_q(A') - (-q)^-1 det_q(A) is nonzero."""
    A = generic_matrix(2)
    swapped = qdet(A.with_columns([2, 1]))
    assert swapped != qdet(A).scale(-(Q ** -1))


@pytest.mark.parametrize("r,j", [(2, 1), (3, 1), (3, 2)])
def test_equal_column_vanishing(r, j):
    assert equal_column_vanishing_check(r, j, mode=ArithMode.EXACT)


def test_equal_column_vanishing_rank_two_is_a_column_relation():
    A = generic_matrix(2)
    expansion = last_column_expansion(A, A.column(1))
    expected = (a(2, 1) * a(1, 1) - (a(1, 1) * a(2, 1)).scale(Q)).scale(-(Q ** -1))
    assert expansion == expected


def test_equal_column_vanishing_bounds():
    with pytest.raises(ValueError):
        equal_column_vanishing_check(3, 3)
    with pytest.raises(ValueError):
        column_swap_check(3, 2, 1)


def test_with_columns_allows_repeats():
    A = generic_matrix(2)
    repeated = A.with_columns([1, 1])
    assert repeated.entry(2, 2) == a(2, 1)
    assert repeated.unit == MixedPoly.one(2)
    assert qdet(repeated) == a(1, 1) * a(2, 1) - (a(2, 1) * a(1, 1)).scale(Q ** -1)


@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_qdet_at_q_one_is_the_classical_determinant(r):
    image = specialize_q1_commutative(qdet(generic_matrix(r)))
    rng = random.Random(r)
    for _ in range(10):
        rows = [[rng.randint(-5, 5) for _ in range(r)] for _ in range(r)]
        assert image(*[value for row in rows for value in row]) == Matrix(rows).det()


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_inversion_generating_function_is_the_q_factorial(n):
    """Sum of q^-inv over S_n equals the product of [k] in q^-1 for k = 1..n."""
    total = ZERO
    for _, inv in permutations_with_inversions(n):
        total = total + LaurentPoly.monomial(-inv)
    factorial = ONE
    for k in range(1, n + 1):
        factorial = factorial * LaurentPoly({-i: 1 for i in range(k)})
    assert total == factorial
