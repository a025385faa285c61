"""
Test Noncommutative and Mixed Polynomials
=========================================
"""

import random
from itertools import product

import pytest

from src.coeffs import ONE, Q, LaurentPoly
from src.ncpoly import (
    MixedMonomial,
    MixedPoly,
    RankMismatchError,
    coefficient_of_x,
    commutative_ring,
    format_poly,
    graded_component,
    mixed_mul,
    parse_poly,
    specialize_q1_commutative,
    x_components,
    x_crossing,
)


def a(i, j, r=2):
    return MixedPoly.letter(r, i, j)


def test_quantum_plane_sorting():
    """x_2 x_1 = q x_1 x_2 while x_1 x_2 is already sorted."""
    x1, x2 = MixedPoly.x(2, 1), MixedPoly.x(2, 2)
    assert x2 * x1 == (x1 * x2).scale(Q)
    assert format_poly(x2 * x1) == "(1*q^1) x[1]^1 x[2]^1"


def test_x_crossing():
    assert x_crossing((0, 1), (1, 0)) == 1
    assert x_crossing((1, 0), (0, 1)) == 0
    assert x_crossing((0, 0, 2), (1, 1, 0)) == 4
    assert x_crossing((-1, 0), (0, 1)) == 0


def test_mixed_mul():
    left = a(1, 1) * MixedPoly.x(2, 2)
    right = a(2, 2) * MixedPoly.x(2, 1)
    expected = MixedPoly.monomial(2, ((1, 1), (2, 2)), (1, 1), Q)
    assert mixed_mul(left, right) == expected
    assert left * right == expected
    one = MixedPoly.one(2)
    assert mixed_mul(one + a(1, 1), one + a(2, 2), max_degree=1) == one + a(1, 1) + a(2, 2)


def test_negative_exponents_invert():
    x1 = MixedPoly.x(2, 1)
    assert MixedPoly.x(2, 1, -1) * x1 == MixedPoly.one(2)
    assert x1 * MixedPoly.x(2, 1, -1) == MixedPoly.one(2)


def test_a_letters_commute_with_x():
    x2 = MixedPoly.x(2, 2)
    assert a(1, 2) * x2 == x2 * a(1, 2)


def test_a_words_do_not_commute():
    assert a(1, 1) * a(2, 2) != a(2, 2) * a(1, 1)


def test_zero_terms_are_dropped():
    p = a(1, 1) - a(1, 1)
    assert p.is_zero()
    assert format_poly(p) == "0"


def test_rank_mismatch():
    with pytest.raises(RankMismatchError):
        a(1, 1, r=2) + a(1, 1, r=3)
    with pytest.raises(ValueError):
        MixedPoly.letter(2, 3, 1)


def test_graded_component_and_degrees():
    p = MixedPoly.one(2) + a(1, 1) + a(1, 2) * a(2, 1)
    assert p.degrees() == [0, 1, 2]
    assert not p.is_homogeneous()
    assert graded_component(p, 1) == a(1, 1)
    assert graded_component(p, 3).is_zero()


def test_coefficient_of_x():
    r = 2
    x1, x2 = MixedPoly.x(r, 1), MixedPoly.x(r, 2)
    X1 = a(1, 1) * x1 + a(1, 2) * x2
    X2 = a(2, 1) * x1 + a(2, 2) * x2
    product = X1 * X2
    expected = a(1, 1) * a(2, 2) + (a(1, 2) * a(2, 1)).scale(Q)
    assert coefficient_of_x(product, (1, 1)) == expected
    parts = x_components(product)
    assert set(parts) == {(2, 0), (1, 1), (0, 2)}
    assert all(part.is_pure() for part in parts.values())


def test_words_requires_pure():
    with pytest.raises(ValueError):
        MixedPoly.x(2, 1).words()
    assert a(1, 2).words() == {((1, 2),): ONE}


def test_format_parse_round_trip():
    p = (a(1, 2) * a(2, 1)).scale(LaurentPoly({-1: 2, 3: -5})) + MixedPoly.x(2, 1, -2) * a(2, 2) + MixedPoly.one(2)
    assert parse_poly(format_poly(p), 2) == p
    assert parse_poly("0", 2).is_zero()
    with pytest.raises(ValueError):
        parse_poly("a[1,1]", 2)


@pytest.mark.parametrize("text", [
    "(1*q^0) a[1,1] x[0]^1",
    "(1*q^0) a[1,1] x[5]^1",
    "(1*q^0) a[3,1]",
])
def test_parse_rejects_out_of_range_indices(text):
    with pytest.raises(ValueError):
        parse_poly(text, 2)


def test_items_are_sorted_deterministically():
    p = a(2, 2) + a(1, 1) * a(1, 1) + a(1, 1)
    keys = [m for m, _ in p.items()]
    assert keys == [
        MixedMonomial(((1, 1),), (0, 0)),
        MixedMonomial(((2, 2),), (0, 0)),
        MixedMonomial(((1, 1), (1, 1)), (0, 0)),
    ]


def test_truncated_product():
    p = MixedPoly.one(2) + a(1, 1)
    assert p.mul_truncated(p, 1) == MixedPoly.one(2) + a(1, 1).scale(2)


def test_commutative_image():
    """q -> 1 and abelianize: det_q of the generic 2x2 matrix becomes the classical determinant."""
    qdet = a(1, 1) * a(2, 2) - (a(2, 1) * a(1, 2)).scale(Q ** -1)
    R = commutative_ring(2)
    a11, a12, a21, a22 = R.gens
    assert specialize_q1_commutative(qdet) == a11 * a22 - a12 * a21
    cross = a(1, 1) * a(2, 2) - a(2, 2) * a(1, 1) - (a(2, 1) * a(1, 2)).scale(Q ** -1) + (a(1, 2) * a(2, 1)).scale(Q)
    assert specialize_q1_commutative(cross) == R.zero


def _sort_by_adjacent_swaps(v1, v2):
    """q-exponent collected by bubble-sorting the letters of x^v1 x^v2 one swap at a time."""
    letters = []
    for vec in (v1, v2):
        for i, e in enumerate(vec):
            letters.extend([(i, 1 if e > 0 else -1)] * abs(e))
    exponent = 0
    for end in range(len(letters) - 1, 0, -1):
        for k in range(end):
            (i, s), (j, t) = letters[k], letters[k + 1]
            if i > j:
                # x_i^s x_j^t = q^{st} x_j^t x_i^s for i > j
                exponent += s * t
                letters[k], letters[k + 1] = letters[k + 1], letters[k]
    return exponent


@pytest.mark.parametrize("r", [1, 2, 3])
def test_x_crossing_matches_adjacent_swaps(r):
    vectors = list(product(range(-2, 3), repeat=r))
    for v1 in vectors:
        for v2 in vectors:
            assert x_crossing(v1, v2) == _sort_by_adjacent_swaps(v1, v2), (v1, v2)


def _random_mixed(rng, r, max_len=2, terms=2):
    letters = [(i, j) for i in range(1, r + 1) for j in range(1, r + 1)]
    total = MixedPoly.zero(r)
    for _ in range(terms):
        aword = [rng.choice(letters) for _ in range(rng.randint(0, max_len))]
        xvec = [rng.randint(-2, 2) for _ in range(r)]
        coefficient = LaurentPoly.monomial(rng.randint(-2, 2), rng.choice([1, -1, 2, -3]))
        total = total + MixedPoly.monomial(r, aword, xvec, coefficient)
    return total


def test_mixed_mul_is_associative():
    rng = random.Random(5)
    for trial in range(60):
        r = 1 + trial % 3
        p, s, t = (_random_mixed(rng, r) for _ in range(3))
        assert (p * s) * t == p * (s * t)


def test_mixed_mul_is_bilinear():
    rng = random.Random(6)
    for trial in range(30):
        r = 1 + trial % 3
        p, s, t = (_random_mixed(rng, r) for _ in range(3))
        assert p * (s + t) == p * s + p * t
        assert (p + s).scale(Q) * t == (p * t + s * t).scale(Q)


def test_graded_component_is_a_projection():
    rng = random.Random(8)
    for trial in range(30):
        r = 1 + trial % 3
        p = _random_mixed(rng, r, max_len=3, terms=4)
        s = _random_mixed(rng, r, max_len=3, terms=4)
        pieces = [graded_component(p, d) for d in range(4)]
        assert sum(pieces, MixedPoly.zero(r)) == p
        for d, piece in enumerate(pieces):
            assert graded_component(piece, d) == piece
        for d in range(7):
            convolution = MixedPoly.zero(r)
            for k in range(d + 1):
                convolution = convolution + graded_component(p, k) * graded_component(s, d - k)
            assert graded_component(p * s, d) == convolution
