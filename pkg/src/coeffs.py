"""
Exact Coefficient Arithmetic
============================

Laurent polynomials in q with arbitrary-precision integer coefficients, and
the rational-function field Q(q) built on top of them. Every algebra in this
package takes its scalars from here.

Usage:
    from fractions import Fraction
    from src.coeffs import Q, ONE, LaurentPoly, RatFunc

    p = (Q - Q ** -1) * (Q + Q ** -1)      # q^2 - q^-2
    p.evaluate(Fraction(2))                # Fraction(15, 4)
    str(p)                                 # "-1*q^-2 + 1*q^2"

    f = RatFunc.from_laurent(Q - ONE).inverse()   # 1/(q - 1)
"""

import random
from fractions import Fraction
from typing import Dict, Iterator, List, Mapping, Optional, Tuple, Union

from sympy.polys.domains import ZZ
from sympy.polys.rings import ring

_QRING, _ = ring("q", ZZ)

Rational = Union[int, Fraction]


class LaurentPoly:
    """Immutable Laurent polynomial in q; the zero polynomial has no terms."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Optional[Mapping[int, int]] = None):
        clean: Dict[int, int] = {}
        if terms:
            for exponent, coefficient in terms.items():
                if coefficient:
                    clean[int(exponent)] = int(coefficient)
        self._terms = clean
        self._hash: Optional[int] = None

    @classmethod
    def _raw(cls, terms: Dict[int, int]) -> "LaurentPoly":
        # caller guarantees no zero coefficients
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def monomial(cls, exponent: int, coefficient: int = 1) -> "LaurentPoly":
        return cls({exponent: coefficient})

    @classmethod
    def const(cls, value: int) -> "LaurentPoly":
        return cls({0: value})

    @classmethod
    def coerce(cls, value: Union[int, "LaurentPoly"]) -> "LaurentPoly":
        if isinstance(value, LaurentPoly):
            return value
        if isinstance(value, int):
            return cls.const(value)
        raise TypeError(f"cannot coerce {type(value).__name__} to LaurentPoly")

    # -- structure -------------------------------------------------------

    def items(self) -> List[Tuple[int, int]]:
        """Terms as (exponent, coefficient) pairs in ascending exponent order."""
        return sorted(self._terms.items())

    def coefficient(self, exponent: int) -> int:
        return self._terms.get(exponent, 0)

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_unit(self) -> bool:
        """True for +-q^k, the units of Z[q, q^-1]."""
        if len(self._terms) != 1:
            return False
        (coefficient,) = self._terms.values()
        return coefficient in (1, -1)

    def valuation(self) -> int:
        if not self._terms:
            raise ValueError("the zero polynomial has no valuation")
        return min(self._terms)

    def degree(self) -> int:
        if not self._terms:
            raise ValueError("the zero polynomial has no degree")
        return max(self._terms)

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by q^k."""
        if k == 0:
            return self
        return LaurentPoly._raw({e + k: c for e, c in self._terms.items()})

    def at_one(self) -> int:
        return sum(self._terms.values())

    def evaluate(self, q0: Rational) -> Fraction:
        if q0 == 0:
            raise ValueError("cannot evaluate a Laurent polynomial at q = 0")
        point = Fraction(q0)
        return sum((Fraction(c) * point ** e for e, c in self._terms.items()), Fraction(0))

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other: Union[int, "LaurentPoly"]) -> "LaurentPoly":
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        elif not isinstance(other, LaurentPoly):
            return NotImplemented
        if not other._terms:
            return self
        if not self._terms:
            return other
        result = dict(self._terms)
        for e, c in other._terms.items():
            total = result.get(e, 0) + c
            if total:
                result[e] = total
            else:
                result.pop(e, None)
        return LaurentPoly._raw(result)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly._raw({e: -c for e, c in self._terms.items()})

    def __sub__(self, other: Union[int, "LaurentPoly"]) -> "LaurentPoly":
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        elif not isinstance(other, LaurentPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: int) -> "LaurentPoly":
        return LaurentPoly.coerce(other) - self

    def __mul__(self, other: Union[int, "LaurentPoly"]) -> "LaurentPoly":
        if isinstance(other, int):
            if other == 0:
                return ZERO
            return LaurentPoly._raw({e: c * other for e, c in self._terms.items()})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        result: Dict[int, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = e1 + e2
                result[e] = result.get(e, 0) + c1 * c2
        return LaurentPoly._raw({e: c for e, c in result.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "LaurentPoly":
        if n < 0:
            if not self.is_unit():
                raise ZeroDivisionError(f"{self} is not invertible in Z[q, q^-1]")
            ((e, c),) = self._terms.items()
            return LaurentPoly._raw({e * n: c ** (-n)})
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- comparison ------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._terms)

    # -- text ------------------------------------------------------------

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        return " + ".join(f"{c}*q^{e}" for e, c in self.items())

    def __repr__(self) -> str:
        return f"LaurentPoly({self})"

    @classmethod
    def parse(cls, text: str) -> "LaurentPoly":
        """Inverse of ``str``: accepts ``"0"`` or terms ``c*q^e`` joined by ``" + "``."""
        text = text.strip()
        if text == "0":
            return ZERO
        terms: Dict[int, int] = {}
        for chunk in text.split(" + "):
            coefficient, sep, exponent = chunk.strip().partition("*q^")
            if not sep:
                raise ValueError(f"malformed Laurent term: {chunk!r}")
            e = int(exponent)
            terms[e] = terms.get(e, 0) + int(coefficient)
        return cls(terms)


ZERO = LaurentPoly()
ONE = LaurentPoly.const(1)
Q = LaurentPoly.monomial(1)


def signed_q_power(k: int) -> LaurentPoly:
    """(-q)^k for any integer k."""
    return LaurentPoly.monomial(k, -1 if k % 2 else 1)


# ---------------------------------------------------------------------------
# Q(q)
# ---------------------------------------------------------------------------

def _to_sympy(p: LaurentPoly):
    return _QRING.from_dict({(e,): c for e, c in p._terms.items()})


def _from_sympy(f) -> LaurentPoly:
    return LaurentPoly({monom[0]: int(coeff) for monom, coeff in f.terms()})


class RatFunc:
    """
    Element of Q(q) in reduced form.

    The stored denominator is an ordinary polynomial with nonzero constant
    term and positive leading coefficient, coprime to the numerator over
    Z[q]; all q-power units live in the numerator.
    """

    __slots__ = ("numerator", "denominator")

    def __init__(self, numerator: Union[int, LaurentPoly], denominator: Union[int, LaurentPoly] = 1):
        num, den = _reduce(LaurentPoly.coerce(numerator), LaurentPoly.coerce(denominator))
        self.numerator = num
        self.denominator = den

    @classmethod
    def _raw(cls, numerator: LaurentPoly, denominator: LaurentPoly) -> "RatFunc":
        obj = cls.__new__(cls)
        obj.numerator = numerator
        obj.denominator = denominator
        return obj

    @classmethod
    def from_laurent(cls, p: LaurentPoly) -> "RatFunc":
        return cls._raw(p, ONE)

    def is_laurent(self) -> bool:
        return self.denominator == ONE

    def as_laurent(self) -> LaurentPoly:
        if not self.is_laurent():
            raise ValueError(f"{self} is not a Laurent polynomial")
        return self.numerator

    def inverse(self) -> "RatFunc":
        if not self.numerator:
            raise ZeroDivisionError("inverse of zero in Q(q)")
        if self.numerator.is_unit() and self.is_laurent():
            return RatFunc._raw(self.numerator ** -1, ONE)
        return RatFunc(self.denominator, self.numerator)

    def evaluate(self, q0: Rational) -> Fraction:
        return self.numerator.evaluate(q0) / self.denominator.evaluate(q0)

    def __add__(self, other: "RatFunc") -> "RatFunc":
        if not isinstance(other, RatFunc):
            return NotImplemented
        if self.is_laurent() and other.is_laurent():
            return RatFunc._raw(self.numerator + other.numerator, ONE)
        if other.is_laurent():
            # gcd(a*d + n, d) = gcd(n, d) = 1, so the sum stays reduced
            return _normalized_sum(self.numerator + other.numerator * self.denominator, self.denominator)
        if self.is_laurent():
            return _normalized_sum(other.numerator + self.numerator * other.denominator, other.denominator)
        return RatFunc(
            self.numerator * other.denominator + other.numerator * self.denominator,
            self.denominator * other.denominator,
        )

    def __neg__(self) -> "RatFunc":
        return RatFunc._raw(-self.numerator, self.denominator)

    def __sub__(self, other: "RatFunc") -> "RatFunc":
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other: "RatFunc") -> "RatFunc":
        if not isinstance(other, RatFunc):
            return NotImplemented
        if self.is_laurent() and other.is_laurent():
            return RatFunc._raw(self.numerator * other.numerator, ONE)
        return RatFunc(self.numerator * other.numerator, self.denominator * other.denominator)

    def __truediv__(self, other: "RatFunc") -> "RatFunc":
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self * other.inverse()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.numerator == other.numerator and self.denominator == other.denominator

    def __hash__(self) -> int:
        return hash((self.numerator, self.denominator))

    def __bool__(self) -> bool:
        return bool(self.numerator)

    def __str__(self) -> str:
        return f"({self.numerator})/({self.denominator})"

    def __repr__(self) -> str:
        return f"RatFunc({self})"


def _normalized_sum(numerator: LaurentPoly, denominator: LaurentPoly) -> RatFunc:
    if not numerator:
        return RatFunc._raw(ZERO, ONE)
    return RatFunc._raw(numerator, denominator)


def _reduce(num: LaurentPoly, den: LaurentPoly) -> Tuple[LaurentPoly, LaurentPoly]:
    if not den:
        raise ZeroDivisionError("zero denominator in Q(q)")
    if not num:
        return ZERO, ONE

    # move every q-power into the numerator
    den_shift = den.valuation()
    den = den.shift(-den_shift)
    num = num.shift(-den_shift)
    num_shift = min(0, num.valuation())
    num_poly = num.shift(-num_shift)

    if den.is_monomial() and den.coefficient(0) in (1, -1):
        return num.shift(0) * den.coefficient(0), ONE

    _, num_cofactor, den_cofactor = _to_sympy(num_poly).cofactors(_to_sympy(den))
    if den_cofactor.LC < 0:
        num_cofactor, den_cofactor = -num_cofactor, -den_cofactor
    return _from_sympy(num_cofactor).shift(num_shift), _from_sympy(den_cofactor)


# ---------------------------------------------------------------------------
# Operation-level entry points
# ---------------------------------------------------------------------------

def laurent_arith(op: str, p1: LaurentPoly, p2: Optional[LaurentPoly] = None) -> LaurentPoly:
    """
    Apply ``op`` in {"add", "mul", "neg"} to Laurent polynomials.

    Args:
        op: operation name
        p1: first operand
        p2: second operand, required for add and mul

    Returns:
        Canonical result
    """
    if op == "neg":
        return -p1
    if p2 is None:
        raise ValueError(f"operation '{op}' needs two operands")
    if op == "add":
        return p1 + p2
    if op == "mul":
        return p1 * p2
    raise ValueError(f"unknown Laurent operation: {op}")


def laurent_eval(p: LaurentPoly, q0: Rational) -> Fraction:
    """Exact value of ``p`` at q = q0; q0 = 0 is rejected."""
    return p.evaluate(q0)


def ratfunc_arith(op: str, f1: RatFunc, f2: Optional[RatFunc] = None) -> RatFunc:
    """Apply ``op`` in {"add", "mul", "inv"} in Q(q); results are reduced."""
    if op == "inv":
        return f1.inverse()
    if f2 is None:
        raise ValueError(f"operation '{op}' needs two operands")
    if op == "add":
        return f1 + f2
    if op == "mul":
        return f1 * f2
    raise ValueError(f"unknown Q(q) operation: {op}")


POINT_BOUNDS = (2, 97)

# distinct values n/d with n, d in POINT_BOUNDS, excluding 1
POINT_POOL_SIZE = len({
    Fraction(n, d)
    for n in range(POINT_BOUNDS[0], POINT_BOUNDS[1] + 1)
    for d in range(POINT_BOUNDS[0], POINT_BOUNDS[1] + 1)
} - {1})


def evaluation_points(count: int, seed: int) -> List[Fraction]:
    """
    Draw ``count`` distinct rational values of q for probabilistic arithmetic.

    Numerators and denominators lie in [2, 97]; q = 1 is excluded because the
    quantum relations degenerate there.
    """
    if count < 1:
        raise ValueError("probabilistic arithmetic needs at least one evaluation point")
    if count > POINT_POOL_SIZE:
        raise ValueError(f"at most {POINT_POOL_SIZE} distinct evaluation points exist, asked for {count}")
    rng = random.Random(seed)
    points: List[Fraction] = []
    seen = set()
    while len(points) < count:
        point = Fraction(rng.randint(*POINT_BOUNDS), rng.randint(*POINT_BOUNDS))
        if point != 1 and point not in seen:
            seen.add(point)
            points.append(point)
    return points


def iter_terms(p: LaurentPoly) -> Iterator[Tuple[int, int]]:
    """Unsorted (exponent, coefficient) view for inner loops."""
    return iter(p._terms.items())
