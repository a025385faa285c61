"""
Noncommutative and Mixed Polynomials
====================================

Words in the generators a[i,j] (1 <= i, j <= r) combined with x-monomials of
the quantum plane x_j x_i = q x_i x_j (i < j). The a's commute with the x's,
so a mixed monomial is stored as (a-word, sorted x-exponent vector); negative
x-exponents are allowed.

An NCPoly is a MixedPoly whose x-vectors are all zero.

Usage:
    from src.ncpoly import MixedPoly, format_poly

    a11 = MixedPoly.letter(2, 1, 1)
    x2 = MixedPoly.x(2, 2)
    x1 = MixedPoly.x(2, 1)
    print(format_poly(x2 * x1))      # (1*q^1) x[1]^1 x[2]^1
"""

import re
from functools import lru_cache
from typing import Dict, Iterable, Iterator, List, NamedTuple, Optional, Tuple, Union

from sympy.polys.domains import ZZ
from sympy.polys.rings import ring

from src.coeffs import ONE, ZERO, LaurentPoly, iter_terms

Letter = Tuple[int, int]
AWord = Tuple[Letter, ...]
XVec = Tuple[int, ...]
Scalar = Union[int, LaurentPoly]


class RankMismatchError(ValueError):
    """Operands live over different matrix ranks."""


class MixedMonomial(NamedTuple):
    aword: AWord
    xvec: XVec

    @property
    def degree(self) -> int:
        return len(self.aword)

    def sort_key(self) -> Tuple[int, AWord, XVec]:
        return (len(self.aword), self.aword, self.xvec)


def x_crossing(v1: XVec, v2: XVec) -> int:
    """Exponent of q picked up when sorting x^{v1} x^{v2}: sum over i > j of v1_i * v2_j."""
    total = 0
    prefix = 0
    for a, b in zip(v1, v2):
        total += a * prefix
        prefix += b
    return total


def _add_vec(v1: XVec, v2: XVec) -> XVec:
    return tuple(a + b for a, b in zip(v1, v2))


class MixedPoly:
    """Finite sum of mixed monomials with Laurent coefficients."""

    __slots__ = ("rank", "_terms")

    def __init__(self, rank: int, terms: Optional[Dict[MixedMonomial, LaurentPoly]] = None):
        self.rank = rank
        self._terms: Dict[MixedMonomial, LaurentPoly] = {}
        if terms:
            for monomial, coefficient in terms.items():
                coefficient = LaurentPoly.coerce(coefficient)
                if coefficient:
                    self._terms[MixedMonomial(tuple(monomial[0]), tuple(monomial[1]))] = coefficient

    @classmethod
    def _raw(cls, rank: int, terms: Dict[MixedMonomial, LaurentPoly]) -> "MixedPoly":
        obj = cls.__new__(cls)
        obj.rank = rank
        obj._terms = terms
        return obj

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls, rank: int) -> "MixedPoly":
        return cls._raw(rank, {})

    @classmethod
    def one(cls, rank: int) -> "MixedPoly":
        return cls._raw(rank, {MixedMonomial((), (0,) * rank): ONE})

    @classmethod
    def monomial(cls, rank: int, aword: Iterable[Letter] = (), xvec: Optional[Iterable[int]] = None,
                 coefficient: Scalar = 1) -> "MixedPoly":
        vec = tuple(xvec) if xvec is not None else (0,) * rank
        if len(vec) != rank:
            raise RankMismatchError(f"x-vector {vec} does not have length {rank}")
        word = tuple(tuple(letter) for letter in aword)
        for i, j in word:
            if not (1 <= i <= rank and 1 <= j <= rank):
                raise ValueError(f"generator a[{i},{j}] out of range for rank {rank}")
        return cls(rank, {MixedMonomial(word, vec): LaurentPoly.coerce(coefficient)})

    @classmethod
    def letter(cls, rank: int, i: int, j: int) -> "MixedPoly":
        return cls.monomial(rank, ((i, j),))

    @classmethod
    def x(cls, rank: int, i: int, exponent: int = 1) -> "MixedPoly":
        vec = [0] * rank
        vec[i - 1] = exponent
        return cls.monomial(rank, (), vec)

    @classmethod
    def from_words(cls, rank: int, words: Dict[AWord, Scalar]) -> "MixedPoly":
        zero = (0,) * rank
        return cls(rank, {MixedMonomial(tuple(w), zero): c for w, c in words.items()})

    # -- structure -------------------------------------------------------

    def items(self) -> List[Tuple[MixedMonomial, LaurentPoly]]:
        """Terms in deterministic (degree, word, x-vector) order."""
        return sorted(self._terms.items(), key=lambda item: item[0].sort_key())

    def coefficient(self, monomial: MixedMonomial) -> LaurentPoly:
        return self._terms.get(monomial, ZERO)

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[MixedMonomial]:
        return iter(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_pure(self) -> bool:
        """True when no term carries an x-part (an NCPoly)."""
        return all(not any(m.xvec) for m in self._terms)

    def degrees(self) -> List[int]:
        return sorted({m.degree for m in self._terms})

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def words(self) -> Dict[AWord, LaurentPoly]:
        if not self.is_pure():
            raise ValueError("x-monomials present; extract a coefficient first")
        return {m.aword: c for m, c in self._terms.items()}

    # -- arithmetic ------------------------------------------------------

    def _check_rank(self, other: "MixedPoly") -> None:
        if self.rank != other.rank:
            raise RankMismatchError(f"rank {self.rank} vs rank {other.rank}")

    def __add__(self, other: "MixedPoly") -> "MixedPoly":
        if not isinstance(other, MixedPoly):
            return NotImplemented
        self._check_rank(other)
        result = dict(self._terms)
        for monomial, coefficient in other._terms.items():
            total = result[monomial] + coefficient if monomial in result else coefficient
            if total:
                result[monomial] = total
            else:
                result.pop(monomial, None)
        return MixedPoly._raw(self.rank, result)

    def __neg__(self) -> "MixedPoly":
        return MixedPoly._raw(self.rank, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other: "MixedPoly") -> "MixedPoly":
        if not isinstance(other, MixedPoly):
            return NotImplemented
        return self + (-other)

    def scale(self, factor: Scalar) -> "MixedPoly":
        factor = LaurentPoly.coerce(factor)
        if not factor:
            return MixedPoly.zero(self.rank)
        return MixedPoly._raw(self.rank, {m: c * factor for m, c in self._terms.items()})

    def __mul__(self, other: "MixedPoly") -> "MixedPoly":
        if not isinstance(other, MixedPoly):
            return NotImplemented
        return mixed_mul(self, other)

    def mul_truncated(self, other: "MixedPoly", max_degree: int) -> "MixedPoly":
        """Product keeping only terms of a-degree at most ``max_degree``."""
        return mixed_mul(self, other, max_degree=max_degree)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MixedPoly):
            return NotImplemented
        return self.rank == other.rank and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.rank, frozenset(self._terms.items())))

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"MixedPoly(rank={self.rank}, {format_poly(self)})"


NCPoly = MixedPoly


def mixed_mul(p1: MixedPoly, p2: MixedPoly, max_degree: Optional[int] = None) -> MixedPoly:
    """
    Bilinear product: words concatenate, x-vectors add, and the coefficient
    gains q^{x_crossing(v1, v2)}.
    """
    p1._check_rank(p2)
    accumulator: Dict[MixedMonomial, Dict[int, int]] = {}
    for m1, c1 in p1._terms.items():
        d1 = len(m1.aword)
        pure1 = not any(m1.xvec)
        for m2, c2 in p2._terms.items():
            if max_degree is not None and d1 + len(m2.aword) > max_degree:
                continue
            if pure1:
                shift = 0
                xvec = m2.xvec
            else:
                shift = x_crossing(m1.xvec, m2.xvec)
                xvec = _add_vec(m1.xvec, m2.xvec)
            key = MixedMonomial(m1.aword + m2.aword, xvec)
            bucket = accumulator.setdefault(key, {})
            for e1, a in iter_terms(c1):
                for e2, b in iter_terms(c2):
                    e = e1 + e2 + shift
                    bucket[e] = bucket.get(e, 0) + a * b
    terms: Dict[MixedMonomial, LaurentPoly] = {}
    for key, bucket in accumulator.items():
        clean = {e: c for e, c in bucket.items() if c}
        if clean:
            terms[key] = LaurentPoly._raw(clean)
    return MixedPoly._raw(p1.rank, terms)


def graded_component(p: MixedPoly, d: int) -> MixedPoly:
    """Terms of a-degree exactly ``d``."""
    return MixedPoly._raw(p.rank, {m: c for m, c in p._terms.items() if len(m.aword) == d})


def coefficient_of_x(p: MixedPoly, v: Iterable[int]) -> MixedPoly:
    """The pure a-part multiplying the sorted monomial x^v."""
    target = tuple(v)
    if len(target) != p.rank:
        raise RankMismatchError(f"x-vector {target} does not have length {p.rank}")
    zero = (0,) * p.rank
    return MixedPoly._raw(
        p.rank, {MixedMonomial(m.aword, zero): c for m, c in p._terms.items() if m.xvec == target}
    )


def x_components(p: MixedPoly) -> Dict[XVec, MixedPoly]:
    """Split ``p`` into its pure a-coefficients, keyed by sorted x-vector."""
    zero = (0,) * p.rank
    parts: Dict[XVec, Dict[MixedMonomial, LaurentPoly]] = {}
    for m, c in p._terms.items():
        parts.setdefault(m.xvec, {})[MixedMonomial(m.aword, zero)] = c
    return {v: MixedPoly._raw(p.rank, terms) for v, terms in sorted(parts.items())}


# ---------------------------------------------------------------------------
# q = 1 commutative image
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def commutative_ring(r: int):
    """sympy ``PolyRing`` over ZZ on the r^2 symbols a{i}_{j}, row-major."""
    names = [f"a{i}_{j}" for i in range(1, r + 1) for j in range(1, r + 1)]
    R, *_ = ring(names, ZZ)
    return R


def specialize_q1_commutative(p: MixedPoly):
    """Image under q -> 1 followed by abelianization, as a sympy ``PolyElement``."""
    if not p.is_pure():
        raise ValueError("only pure a-polynomials have a commutative image")
    r = p.rank
    R = commutative_ring(r)
    exponents: Dict[Tuple[int, ...], int] = {}
    for m, c in p._terms.items():
        vec = [0] * (r * r)
        for i, j in m.aword:
            vec[(i - 1) * r + (j - 1)] += 1
        key = tuple(vec)
        exponents[key] = exponents.get(key, 0) + c.at_one()
    return R.from_dict({k: v for k, v in exponents.items() if v})


# ---------------------------------------------------------------------------
# Text form
# ---------------------------------------------------------------------------

_TERM = re.compile(r"\(([^()]*)\)((?:\s+(?:a\[\d+,\d+\]|x\[\d+\]\^-?\d+))*)")
_LETTER = re.compile(r"a\[(\d+),(\d+)\]")
_XPOW = re.compile(r"x\[(\d+)\]\^(-?\d+)")


def format_monomial(m: MixedMonomial) -> str:
    letters = [f"a[{i},{j}]" for i, j in m.aword]
    powers = [f"x[{i}]^{e}" for i, e in enumerate(m.xvec, start=1) if e]
    return " ".join(letters + powers)


def format_poly(p: MixedPoly) -> str:
    if not p:
        return "0"
    chunks = []
    for m, c in p.items():
        body = format_monomial(m)
        chunks.append(f"({c}) {body}" if body else f"({c})")
    return " + ".join(chunks)


def parse_poly(text: str, rank: int) -> MixedPoly:
    """Inverse of ``format_poly`` for a known rank."""
    text = text.strip()
    result = MixedPoly.zero(rank)
    if text == "0":
        return result
    position = 0
    while position < len(text):
        match = _TERM.match(text, position)
        if match is None:
            raise ValueError(f"cannot parse polynomial at offset {position}: {text[position:position + 30]!r}")
        coefficient = LaurentPoly.parse(match.group(1))
        body = match.group(2)
        word = tuple((int(i), int(j)) for i, j in _LETTER.findall(body))
        vec = [0] * rank
        for i, e in _XPOW.findall(body):
            if not 1 <= int(i) <= rank:
                raise ValueError(f"variable x[{i}] out of range for rank {rank}")
            vec[int(i) - 1] += int(e)
        result = result + MixedPoly.monomial(rank, word, vec, coefficient)
        position = match.end()
        if text.startswith(" + ", position):
            position += 3
        elif position != len(text):
            raise ValueError(f"expected ' + ' at offset {position}")
    return result
