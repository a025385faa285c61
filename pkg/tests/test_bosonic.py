"""
Test Bosonic Side and the Master Identity
=========================================

G(m), Bos(A), trace series, and the degree-by-degree verification of
Ferm(A) Bos(A) = 1 in both orders.
"""

import pytest

from src import bosonic
from src.bosonic import (
    bos_truncated,
    boson_fermion_check,
    classical_check,
    g_coefficient,
    inclusion_exclusion_check,
    make_X,
    master_verify,
    multi_indices,
    multi_indices_upto,
    support_series,
    tr_ext,
    tr_sym,
)
from src.coeffs import Q
from src.ncpoly import MixedPoly, graded_component, parse_poly, x_components
from src.protocol import ArithMode, Flavor
from src.qdet import ferm, generic_matrix, qdet
from src.relations import (
    MembershipEngine,
    full_quantum_relations,
    ideal_member,
    rewrite_normal_form,
    right_quantum_relations,
)


def a(i, j, r=2):
    return MixedPoly.letter(r, i, j)


def test_make_X():
    X1, X2 = make_X(2)
    assert X1 == a(1, 1) * MixedPoly.x(2, 1) + a(1, 2) * MixedPoly.x(2, 2)
    for X in make_X(3):
        assert len(X) == 3
        assert X.degrees() == [1]
    with pytest.raises(ValueError):
        make_X(0)


def test_multi_indices():
    assert list(multi_indices(2, 2)) == [(2, 0), (1, 1), (0, 2)]
    assert len(list(multi_indices_upto(3, 4))) == 35


def test_g_coefficient_examples():
    assert g_coefficient(2, (0, 0)) == MixedPoly.one(2)
    assert g_coefficient(2, (1, 1)) == a(1, 1) * a(2, 2) + (a(1, 2) * a(2, 1)).scale(Q)
    assert g_coefficient(2, (2, 0)) == a(1, 1) * a(1, 1)


def test_g_coefficient_grading_and_row_content():
    for r in (2, 3):
        for m in multi_indices_upto(r, 4):
            g = g_coefficient(r, m)
            assert g.degrees() == [sum(m)]
            for word in g.words():
                rows = [sum(1 for i, _ in word if i == k) for k in range(1, r + 1)]
                assert tuple(rows) == m


def test_g_coefficient_rejects_bad_index():
    with pytest.raises(ValueError):
        g_coefficient(2, (1, -1))


def test_bos_truncated_examples():
    a1 = MixedPoly.letter(1, 1, 1)
    assert bos_truncated(1, 3) == MixedPoly.one(1) + a1 + a1 * a1 + a1 * a1 * a1
    assert bos_truncated(2, 1) == MixedPoly.one(2) + a(1, 1) + a(2, 2)
    expected = a(1, 1) * a(1, 1) + a(1, 1) * a(2, 2) + (a(1, 2) * a(2, 1)).scale(Q) + a(2, 2) * a(2, 2)
    assert graded_component(bos_truncated(2, 2), 2) == expected


def test_trace_series():
    assert tr_sym(2, 0) == MixedPoly.one(2)
    assert tr_ext(2, 0) == MixedPoly.one(2)
    assert tr_ext(2, 1) == a(1, 1) + a(2, 2)
    assert tr_ext(2, 2) == qdet(generic_matrix(2))
    assert tr_ext(2, 3).is_zero()
    assert tr_sym(2, 3) == graded_component(bos_truncated(2, 3), 3)


def test_support_series():
    assert support_series(2, (), 3) == MixedPoly.one(2)
    a11 = a(1, 1)
    assert support_series(2, (1,), 2) == MixedPoly.one(2) + a11 + a11 * a11


def test_master_rank_one_telescopes():
    outcome = master_verify(1, 5, mode=ArithMode.EXACT)
    assert outcome.verdict
    assert {c.order for c in outcome.certificates} == {"ferm*bos", "bos*ferm"}
    assert all(c.method in ("constant", "exact-zero") for c in outcome.certificates)


def test_degree_two_residual_is_the_cross_relation():
    product = ferm(generic_matrix(2)).mul_truncated(bos_truncated(2, 2), 2)
    assert graded_component(product, 2) == right_quantum_relations(2).generators[-1]
    assert graded_component(product, 1).is_zero()


@pytest.mark.parametrize("mode", [ArithMode.EXACT, ArithMode.PROBABILISTIC])
def test_master_rank_two(mode):
    outcome = master_verify(2, 4, Flavor.RIGHT_QUANTUM, mode)
    assert outcome.verdict
    per_order = [c for c in outcome.certificates if c.order == "bos*ferm"]
    assert [c.degree for c in per_order] == [0, 1, 2, 3, 4]


def test_master_full_quantum_uses_rewriting():
    outcome = master_verify(2, 4, Flavor.FULL_QUANTUM)
    assert outcome.verdict
    assert any(c.method == "rewrite" for c in outcome.certificates)


def test_right_quantum_pass_implies_full_quantum_pass():
    for r, N in [(2, 3), (3, 2)]:
        rq = master_verify(r, N, Flavor.RIGHT_QUANTUM, ArithMode.EXACT)
        fq = master_verify(r, N, Flavor.FULL_QUANTUM)
        assert not rq.verdict or fq.verdict


def test_master_rejects_left_quantum():
    with pytest.raises(ValueError):
        master_verify(2, 2, Flavor.LEFT_QUANTUM)


def test_master_reports_failing_degree(monkeypatch):
    """A Bos(A) missing its degree-2 part fails at degree 2 with a parseable residual."""
    broken = MixedPoly.one(2) + a(1, 1) + a(2, 2)
    monkeypatch.setattr(bosonic, "bos_truncated", lambda r, N: broken)
    outcome = master_verify(2, 3, mode=ArithMode.EXACT)
    assert not outcome.verdict
    assert outcome.info["failed_degree"] == 2
    failed = [c for c in outcome.certificates if not c.verdict]
    assert {c.order for c in failed} == {"ferm*bos", "bos*ferm"}
    assert all(c.degree == 2 for c in failed)
    residual = parse_poly(failed[0].residual_terms, 2)
    assert residual.degrees() == [2]
    # each order stops at its first failure
    assert max(c.degree for c in outcome.certificates) == 2


@pytest.mark.parametrize("r,N", [(1, 5), (2, 5), (3, 3)])
def test_classical_check(r, N):
    outcome = classical_check(r, N)
    assert outcome.verdict
    assert [c.method for c in outcome.certificates] == ["commutative-series", "q1-image"]


@pytest.mark.slow
def test_classical_check_rank_three_degree_five():
    assert classical_check(3, 5)


@pytest.mark.parametrize("r,N", [(1, 3), (2, 2), (2, 3)])
def test_inclusion_exclusion(r, N):
    assert inclusion_exclusion_check(r, N, ArithMode.EXACT)


def test_inclusion_exclusion_rank_three():
    assert inclusion_exclusion_check(3, 3)


@pytest.mark.parametrize("flavor", [Flavor.RIGHT_QUANTUM, Flavor.FULL_QUANTUM])
def test_boson_fermion(flavor):
    outcome = boson_fermion_check(2, 3, flavor)
    assert outcome.verdict
    exact = [c for c in outcome.certificates if c.method == "exact"]
    assert len(exact) == 2


def test_lemma1_corollary_at_generating_level():
    """X_2 X_1 - q X_1 X_2 has every x-coefficient in the ideal."""
    X1, X2 = make_X(2)
    residual = X2 * X1 - (X1 * X2).scale(Q)
    rs = right_quantum_relations(2)
    for part in x_components(residual).values():
        assert ideal_member(part, rs, ArithMode.EXACT).verdict


@pytest.mark.slow
def test_master_rank_two_degree_six_exact():
    assert master_verify(2, 6, Flavor.RIGHT_QUANTUM, ArithMode.EXACT)


@pytest.mark.slow
def test_master_rank_three_degree_four():
    assert master_verify(3, 4, Flavor.RIGHT_QUANTUM, ArithMode.PROBABILISTIC, evals=3, seed=42)


@pytest.mark.slow
def test_master_full_quantum_rank_three():
    assert master_verify(3, 4, Flavor.FULL_QUANTUM)


@pytest.mark.parametrize("r", [2, pytest.param(3, marks=pytest.mark.slow)])
def test_full_quantum_rewriting_matches_membership(r):
    """Every master-identity component gets the same verdict from rewriting and from exact membership."""
    N = 4
    outcome = master_verify(r, N, Flavor.FULL_QUANTUM)
    assert outcome.verdict
    assert {c.method for c in outcome.certificates if c.degree > 0} == {"rewrite"}

    fq = full_quantum_relations(r)
    engine = MembershipEngine()
    fermionic, bosonic_part = ferm(generic_matrix(r)), bos_truncated(r, N)
    stray = a(r, 1, r)
    for left, right in ((fermionic, bosonic_part), (bosonic_part, fermionic)):
        product = left.mul_truncated(right, N)
        for d in range(1, N + 1):
            component = graded_component(product, d)
            by_rewriting = rewrite_normal_form(component, fq).is_zero()
            assert by_rewriting == ideal_member(component, fq, ArithMode.EXACT, engine=engine).verdict
            assert by_rewriting
            perturbed = component + stray * MixedPoly.monomial(r, [(1, 1)] * (d - 1))
            assert not rewrite_normal_form(perturbed, fq).is_zero()
            assert not ideal_member(perturbed, fq, ArithMode.EXACT, engine=engine).verdict
