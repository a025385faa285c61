"""
Test Coefficient Arithmetic
===========================

Laurent polynomials, Q(q) and the seeded evaluation points.
"""

import random
from fractions import Fraction

import pytest

from src.coeffs import (
    ONE,
    POINT_POOL_SIZE,
    Q,
    ZERO,
    LaurentPoly,
    RatFunc,
    evaluation_points,
    laurent_arith,
    laurent_eval,
    ratfunc_arith,
    signed_q_power,
)


def test_laurent_add_cancels_to_canonical_zero():
    """q + (-q) has no stored terms."""
    result = laurent_arith("add", Q, -Q)
    assert result == ZERO
    assert result.is_zero()
    assert str(result) == "0"


def test_laurent_mul_telescopes():
    """(1 - q)(1 + q + q^2) = 1 - q^3."""
    result = laurent_arith("mul", ONE - Q, ONE + Q + Q ** 2)
    assert result == ONE - Q ** 3


def test_laurent_negative_powers():
    assert Q ** -1 * Q == ONE
    assert (Q ** -2).valuation() == -2
    with pytest.raises(ZeroDivisionError):
        (ONE + Q) ** -1


def test_laurent_eval():
    assert laurent_eval(Q ** 2 - Q ** -2, 2) == Fraction(15, 4)
    assert laurent_eval(Q ** -1, Fraction(1, 2)) == 2
    with pytest.raises(ValueError):
        laurent_eval(Q, 0)


def test_signed_q_power():
    assert signed_q_power(0) == ONE
    assert signed_q_power(1) == -Q
    assert signed_q_power(-1) == -(Q ** -1)
    assert signed_q_power(-2) == Q ** -2


def test_text_form_parses_back():
    p = LaurentPoly({-3: 2, 0: -1, 5: 7})
    assert str(p) == "2*q^-3 + -1*q^0 + 7*q^5"
    assert LaurentPoly.parse(str(p)) == p
    assert LaurentPoly.parse("0") == ZERO
    with pytest.raises(ValueError):
        LaurentPoly.parse("q^2")


def test_at_one_and_shift():
    p = LaurentPoly({-1: 3, 2: -1})
    assert p.at_one() == 2
    assert p.shift(3) == LaurentPoly({2: 3, 5: -1})


def test_ratfunc_opposite_denominators_cancel():
    """1/(q - 1) + 1/(1 - q) = 0."""
    f = ratfunc_arith("inv", RatFunc.from_laurent(Q - ONE))
    g = ratfunc_arith("inv", RatFunc.from_laurent(ONE - Q))
    assert not ratfunc_arith("add", f, g)


def test_ratfunc_reduces_to_laurent():
    """(q^2 - 1) * 1/(q - 1) = q + 1."""
    f = ratfunc_arith("mul", RatFunc.from_laurent(Q ** 2 - ONE), RatFunc.from_laurent(Q - ONE).inverse())
    assert f.is_laurent()
    assert f.as_laurent() == Q + ONE


def test_ratfunc_normal_form_is_unique():
    f = RatFunc(Q ** 2 + Q, Q ** 2 - ONE)          # q/(q - 1)
    g = RatFunc(Q, Q - ONE)
    assert f == g
    assert hash(f) == hash(g)
    assert f.evaluate(3) == Fraction(3, 2)


def test_ratfunc_zero_division():
    with pytest.raises(ZeroDivisionError):
        RatFunc(ONE, ZERO)
    with pytest.raises(ZeroDivisionError):
        RatFunc(ZERO).inverse()


def test_ratfunc_division_inverts_multiplication():
    f = RatFunc(ONE + Q ** 3, Q - 2 * ONE)
    g = RatFunc(Q ** -1 + ONE)
    assert (f * g) / g == f


def test_evaluation_points_are_seeded_and_valid():
    points = evaluation_points(5, 42)
    assert points == evaluation_points(5, 42)
    assert len(set(points)) == 5
    for point in points:
        assert point != 1
        assert isinstance(point, Fraction)
    assert evaluation_points(3, 7) != evaluation_points(3, 8)
    with pytest.raises(ValueError):
        evaluation_points(0, 42)


def test_evaluation_points_pool_is_finite():
    assert 1000 < POINT_POOL_SIZE < 97 * 97
    with pytest.raises(ValueError):
        evaluation_points(POINT_POOL_SIZE + 1, 42)


def _random_laurent(rng, terms=3):
    return LaurentPoly({rng.randint(-3, 3): rng.randint(-4, 4) for _ in range(terms)})


def _random_point(rng):
    return Fraction(rng.choice([-1, 1]) * rng.randint(1, 9), rng.randint(1, 9))


def test_laurent_eval_is_multiplicative():
    rng = random.Random(3)
    for _ in range(50):
        p, s = _random_laurent(rng), _random_laurent(rng)
        q0 = _random_point(rng)
        assert laurent_eval(p * s, q0) == laurent_eval(p, q0) * laurent_eval(s, q0)
        assert laurent_eval(p + s, q0) == laurent_eval(p, q0) + laurent_eval(s, q0)


def test_ratfunc_reduction_is_idempotent():
    rng = random.Random(4)
    for _ in range(40):
        numerator = _random_laurent(rng)
        denominator = _random_laurent(rng) * (ONE + Q)
        if not denominator:
            continue
        f = RatFunc(numerator, denominator)
        assert RatFunc(f.numerator, f.denominator) == f
        if numerator:
            assert ratfunc_arith("mul", f, ratfunc_arith("inv", f)) == RatFunc(1)
