"""
Quadratic Relations and Ideal Membership
========================================

Generators of the right-quantum, left-quantum and full-quantum ideals in the
free algebra on a[i,j], a rewriting system onto sorted words for the
full-quantum algebra, and a fixed-degree decision procedure for membership
in any of these graded two-sided ideals.

For a 2x2 minor with rows i < i' and columns j < j' the letters are
a = a[i,j], b = a[i,j'], c = a[i',j], d = a[i',j'].

Every generator preserves both the multiset of rows and the multiset of
columns of a word, so the degree-d piece of the ideal splits into blocks
indexed by (row content, column content); membership is decided block by
block with sparse elimination.

Usage:
    from src.relations import right_quantum_relations, ideal_member

    rs = right_quantum_relations(2)
    certificate = ideal_member(rs.generators[2], rs)
    certificate.verdict      # True
"""

import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from math import comb
from typing import Dict, Iterator, List, Optional, Tuple, Union

from src.coeffs import ONE, Q, LaurentPoly, RatFunc, evaluation_points
from src.linalg import EchelonBasis, least_fill_order
from src.ncpoly import AWord, Letter, MixedPoly, format_poly, graded_component
from src.protocol import DEFAULT_SEED, ArithMode, DegreeCertificate, Flavor, MembershipCertificate

logger = logging.getLogger(__name__)

BlockKey = Tuple[Tuple[int, ...], Tuple[int, ...]]
Point = Optional[Fraction]

Q_INV = Q ** -1


class InhomogeneousError(ValueError):
    """Membership was asked for a polynomial mixing several degrees."""


class UnsupportedFlavorError(ValueError):
    """The requested procedure is not available for this relation flavor."""


@dataclass(frozen=True)
class RelationSet:
    rank: int
    flavor: Flavor
    generators: Tuple[MixedPoly, ...] = field(compare=False)

    @property
    def key(self) -> Tuple[int, str]:
        return (self.rank, self.flavor.value)

    def __len__(self) -> int:
        return len(self.generators)


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------

def minors(r: int) -> Iterator[Tuple[int, int, int, int]]:
    """All (i, i', j, j') with i < i' and j < j'."""
    for i, i2 in combinations(range(1, r + 1), 2):
        for j, j2 in combinations(range(1, r + 1), 2):
            yield i, i2, j, j2


def _q_commutation(r: int, later: Letter, earlier: Letter) -> MixedPoly:
    # later*earlier - q*earlier*later
    return MixedPoly.from_words(r, {(later, earlier): ONE, (earlier, later): -Q})


def _column_relations(r: int) -> List[MixedPoly]:
    return [
        _q_commutation(r, (i2, j), (i, j))
        for j in range(1, r + 1)
        for i, i2 in combinations(range(1, r + 1), 2)
    ]


def _row_relations(r: int) -> List[MixedPoly]:
    return [
        _q_commutation(r, (i, j2), (i, j))
        for i in range(1, r + 1)
        for j, j2 in combinations(range(1, r + 1), 2)
    ]


def _cross_relation(r: int, i: int, i2: int, j: int, j2: int, left: bool = False) -> MixedPoly:
    a, b, c, d = (i, j), (i, j2), (i2, j), (i2, j2)
    if left:
        # ad - da - q^-1 bc + q cb
        return MixedPoly.from_words(r, {(a, d): ONE, (d, a): -ONE, (b, c): -Q_INV, (c, b): Q})
    # ad - da - q^-1 cb + q bc
    return MixedPoly.from_words(r, {(a, d): ONE, (d, a): -ONE, (c, b): -Q_INV, (b, c): Q})


def _anti_diagonal_relation(r: int, i: int, i2: int, j: int, j2: int) -> MixedPoly:
    b, c = (i, j2), (i2, j)
    return MixedPoly.from_words(r, {(c, b): ONE, (b, c): -ONE})


def _require_rank(r: int) -> None:
    if r < 1:
        raise ValueError(f"rank must be at least 1, got {r}")


@lru_cache(maxsize=None)
def right_quantum_relations(r: int) -> RelationSet:
    """Column q-commutation for every column plus the cross relation of every minor."""
    _require_rank(r)
    generators = _column_relations(r) + [_cross_relation(r, *m) for m in minors(r)]
    return RelationSet(r, Flavor.RIGHT_QUANTUM, tuple(generators))


@lru_cache(maxsize=None)
def left_quantum_relations(r: int) -> RelationSet:
    _require_rank(r)
    generators = _row_relations(r) + [_cross_relation(r, *m, left=True) for m in minors(r)]
    return RelationSet(r, Flavor.LEFT_QUANTUM, tuple(generators))


@lru_cache(maxsize=None)
def full_quantum_relations(r: int) -> RelationSet:
    """Relations of M_q(r); the right-quantum generators come first, unchanged."""
    _require_rank(r)
    generators = (
        list(right_quantum_relations(r).generators)
        + _row_relations(r)
        + [_anti_diagonal_relation(r, *m) for m in minors(r)]
    )
    return RelationSet(r, Flavor.FULL_QUANTUM, tuple(generators))


def relation_set(r: int, flavor: Union[Flavor, str]) -> RelationSet:
    flavor = Flavor(flavor)
    if flavor == Flavor.RIGHT_QUANTUM:
        return right_quantum_relations(r)
    if flavor == Flavor.FULL_QUANTUM:
        return full_quantum_relations(r)
    return left_quantum_relations(r)


# ---------------------------------------------------------------------------
# Rewriting onto sorted words (full-quantum only)
# ---------------------------------------------------------------------------

def _rewrite_pair(u: Letter, v: Letter) -> List[Tuple[LaurentPoly, Tuple[Letter, Letter]]]:
    """Replacement for the out-of-order pair u v (u > v lexicographically)."""
    i, j = u
    k, l = v
    if i == k or j == l:
        # ba -> q ab, ca -> q ac
        return [(Q, (v, u))]
    if j > l:
        # da -> ad + (q - q^-1) bc
        return [(ONE, (v, u)), (Q - Q_INV, ((k, j), (i, l)))]
    # cb -> bc
    return [(ONE, (v, u))]


def _first_descent(word: AWord) -> Optional[int]:
    for position in range(len(word) - 1):
        if word[position] > word[position + 1]:
            return position
    return None


class SortedWordRewriter:
    """Leftmost-first rewriting of words to sorted words, memoized per word."""

    def __init__(self, rank: int):
        self.rank = rank
        self._cache: Dict[AWord, Dict[AWord, LaurentPoly]] = {}

    def normal_form_word(self, word: AWord) -> Dict[AWord, LaurentPoly]:
        cached = self._cache.get(word)
        if cached is not None:
            return cached
        position = _first_descent(word)
        if position is None:
            result = {word: ONE}
        else:
            result: Dict[AWord, LaurentPoly] = {}
            for coefficient, pair in _rewrite_pair(word[position], word[position + 1]):
                rewritten = word[:position] + pair + word[position + 2:]
                for sorted_word, c in self.normal_form_word(rewritten).items():
                    total = result.get(sorted_word)
                    total = c * coefficient if total is None else total + c * coefficient
                    if total:
                        result[sorted_word] = total
                    else:
                        result.pop(sorted_word, None)
        self._cache[word] = result
        return result

    def normal_form(self, p: MixedPoly) -> MixedPoly:
        result: Dict[AWord, LaurentPoly] = {}
        for word, coefficient in p.words().items():
            for sorted_word, c in self.normal_form_word(word).items():
                total = result.get(sorted_word)
                total = c * coefficient if total is None else total + c * coefficient
                if total:
                    result[sorted_word] = total
                else:
                    result.pop(sorted_word, None)
        return MixedPoly.from_words(self.rank, result)


@lru_cache(maxsize=None)
def _rewriter(rank: int) -> SortedWordRewriter:
    return SortedWordRewriter(rank)


def rewrite_normal_form(p: MixedPoly, rs: RelationSet) -> MixedPoly:
    """Normal form of ``p`` on sorted words; only full-quantum relations orient confluently."""
    if rs.flavor != Flavor.FULL_QUANTUM:
        raise UnsupportedFlavorError(
            f"no certified rewriting for {rs.flavor.value} relations; use ideal_member"
        )
    if p.rank != rs.rank:
        raise ValueError(f"polynomial of rank {p.rank} against relations of rank {rs.rank}")
    return _rewriter(rs.rank).normal_form(p)


# ---------------------------------------------------------------------------
# Fixed-degree membership
# ---------------------------------------------------------------------------

def word_content(word: AWord, r: int) -> BlockKey:
    rows = [0] * r
    cols = [0] * r
    for i, j in word:
        rows[i - 1] += 1
        cols[j - 1] += 1
    return tuple(rows), tuple(cols)


def _add_content(*contents: BlockKey) -> BlockKey:
    rows = tuple(map(sum, zip(*(c[0] for c in contents))))
    cols = tuple(map(sum, zip(*(c[1] for c in contents))))
    return rows, cols


@dataclass
class BlockBasis:
    columns: Dict[AWord, int]
    basis: EchelonBasis
    rows: int


SpanningRows = Dict[BlockKey, List[Dict[AWord, LaurentPoly]]]


class MembershipEngine:
    """
    Caches the spanning sets {u*g*v} per degree and their echelon forms per
    block and evaluation point, so repeated queries at one degree are cheap.
    """

    def __init__(self):
        self._spanning: Dict[Tuple, SpanningRows] = {}
        self._bases: Dict[Tuple, BlockBasis] = {}

    def spanning_rows(self, rs: RelationSet, degree: int) -> SpanningRows:
        key = (rs.key, degree)
        cached = self._spanning.get(key)
        if cached is not None:
            return cached
        r = rs.rank
        blocks: SpanningRows = {}
        if degree >= 2 and rs.generators:
            letters = [(i, j) for i in range(1, r + 1) for j in range(1, r + 1)]
            words_by_length = {
                n: [(w, word_content(w, r)) for w in product(letters, repeat=n)]
                for n in range(degree - 1)
            }
            for generator in rs.generators:
                terms = list(generator.words().items())
                g_content = word_content(terms[0][0], r)
                for left in range(degree - 1):
                    right = degree - 2 - left
                    for u, u_content in words_by_length[left]:
                        for v, v_content in words_by_length[right]:
                            block = _add_content(u_content, g_content, v_content)
                            row = {u + w + v: c for w, c in terms}
                            blocks.setdefault(block, []).append(row)
        logger.debug(
            "spanning set for %s r=%d degree %d: %d rows in %d blocks",
            rs.flavor.value, r, degree, sum(map(len, blocks.values())), len(blocks),
        )
        self._spanning[key] = blocks
        return blocks

    def block_basis(self, rs: RelationSet, degree: int, block: BlockKey, point: Point) -> Optional[BlockBasis]:
        key = (rs.key, degree, block, point)
        cached = self._bases.get(key)
        if cached is not None:
            return cached
        rows = self.spanning_rows(rs, degree).get(block)
        if not rows:
            return None
        columns = least_fill_order(rows)
        basis = EchelonBasis()
        for row in sorted(rows, key=len):
            basis.insert(_convert_row(row, columns, point))
        result = BlockBasis(columns, basis, len(rows))
        self._bases[key] = result
        return result

    def decide(self, words: Dict[AWord, LaurentPoly], rs: RelationSet, degree: int,
               point: Point) -> Tuple[bool, int, int]:
        """Membership of a pure homogeneous polynomial at one point (None = exact)."""
        by_block: Dict[BlockKey, Dict[AWord, LaurentPoly]] = {}
        for word, coefficient in words.items():
            by_block.setdefault(word_content(word, rs.rank), {})[word] = coefficient
        verdict = True
        rows = cols = 0
        for block in sorted(by_block):
            target = by_block[block]
            block_basis = self.block_basis(rs, degree, block, point)
            if block_basis is None:
                # no relation reaches this block; any surviving word is a witness
                if any(target.values()):
                    verdict = False
                    break
                continue
            rows += block_basis.rows
            cols += len(block_basis.columns)
            if any(word not in block_basis.columns for word in target):
                verdict = False
                break
            if not block_basis.basis.contains(_convert_row(target, block_basis.columns, point)):
                verdict = False
                break
        return verdict, rows, cols

    def rank(self, rs: RelationSet, degree: int, point: Point) -> int:
        return sum(
            self.block_basis(rs, degree, block, point).basis.rank
            for block in sorted(self.spanning_rows(rs, degree))
        )


def _convert_row(row: Dict[AWord, LaurentPoly], columns: Dict[AWord, int], point: Point) -> Dict[int, object]:
    converted: Dict[int, object] = {}
    for word, coefficient in row.items():
        if point is None:
            value = RatFunc.from_laurent(coefficient)
        else:
            value = coefficient.evaluate(point)
        if value:
            converted[columns[word]] = value
    return converted


_global_engine: Optional[MembershipEngine] = None


def get_membership_engine() -> MembershipEngine:
    """Get the process-wide membership engine."""
    global _global_engine
    if _global_engine is None:
        _global_engine = MembershipEngine()
    return _global_engine


def _points_for(mode: ArithMode, evals: int, seed: int) -> List[Point]:
    if mode == ArithMode.EXACT:
        return [None]
    return list(evaluation_points(evals, seed))


def ideal_member(p: MixedPoly, rs: RelationSet, mode: Union[ArithMode, str] = ArithMode.PROBABILISTIC,
                 evals: int = 3, seed: int = DEFAULT_SEED, degree: Optional[int] = None,
                 engine: Optional[MembershipEngine] = None) -> MembershipCertificate:
    """
    Decide whether the homogeneous element ``p`` lies in the ideal generated by ``rs``.

    Args:
        p: pure a-polynomial, homogeneous of one a-degree
        rs: relation set of the same rank
        mode: exact elimination over Q(q), or exact rationals at ``evals`` random points
        evals: number of evaluation points in probabilistic mode
        seed: seed for the evaluation points
        degree: degree to record when ``p`` is zero
        engine: membership cache, the global engine by default

    Returns:
        MembershipCertificate with the verdict and the size of the linear systems
    """
    mode = ArithMode(mode)
    if mode == ArithMode.PROBABILISTIC and evals < 1:
        raise ValueError("probabilistic membership needs at least one evaluation point")
    if p.rank != rs.rank:
        raise ValueError(f"polynomial of rank {p.rank} against relations of rank {rs.rank}")
    if not p.is_pure():
        raise ValueError("ideal membership is defined on pure a-polynomials")
    degrees = p.degrees()
    if len(degrees) > 1:
        raise InhomogeneousError(f"element mixes degrees {degrees}; split with graded_component")
    d = degrees[0] if degrees else (degree or 0)
    engine = engine or get_membership_engine()

    start = time.perf_counter()
    points = _points_for(mode, evals, seed)
    verdict = True
    rows = cols = 0
    words = p.words()
    if words:
        for point in points:
            verdict, rows, cols = engine.decide(words, rs, d, point)
            if not verdict:
                break
    elapsed = (time.perf_counter() - start) * 1000.0
    logger.debug("membership degree %d (%s): %s in %.1f ms", d, mode.value, verdict, elapsed)
    return MembershipCertificate(
        degree=d,
        mode=mode,
        verdict=verdict,
        matrix_rows=rows,
        matrix_cols=cols,
        eval_points=[str(point) for point in points if point is not None],
        elapsed_ms=round(elapsed, 3),
        soundness=(
            "decisive" if mode == ArithMode.EXACT or not verdict
            else f"membership holds at {len(points)} random values of q"
        ),
    )


def zero_mod_ideal(p: MixedPoly, rs: RelationSet, mode: Union[ArithMode, str] = ArithMode.PROBABILISTIC,
                   evals: int = 3, seed: int = DEFAULT_SEED, component: Optional[str] = None,
                   order: Optional[str] = None) -> List[DegreeCertificate]:
    """
    Certify ``p`` = 0 in the quotient, one certificate per nonzero graded component.

    The degree-0 component must vanish outright since the ideal has no constants.
    A zero ``p`` yields no certificates.
    """
    certificates: List[DegreeCertificate] = []
    for d in p.degrees():
        part = graded_component(p, d)
        if d == 0:
            certificates.append(DegreeCertificate(
                degree=0, verdict=False, method="constant", component=component, order=order,
                residual_terms=format_poly(part),
            ))
            continue
        membership = ideal_member(part, rs, mode, evals, seed)
        certificates.append(DegreeCertificate(
            degree=d, verdict=membership.verdict, method="ideal-membership", component=component,
            order=order, membership=membership,
            residual_terms=None if membership.verdict else format_poly(part),
        ))
    return certificates


def equal_mod_ideal(p1: MixedPoly, p2: MixedPoly, rs: RelationSet,
                    mode: Union[ArithMode, str] = ArithMode.PROBABILISTIC,
                    evals: int = 3, seed: int = DEFAULT_SEED) -> bool:
    """True iff every graded component of p1 - p2 lies in the ideal."""
    return all(c.verdict for c in zero_mod_ideal(p1 - p2, rs, mode, evals, seed))


def graded_dimension(rs: RelationSet, d: int, mode: Union[ArithMode, str] = ArithMode.PROBABILISTIC,
                     evals: int = 1, seed: int = DEFAULT_SEED,
                     engine: Optional[MembershipEngine] = None) -> int:
    """Dimension of the degree-``d`` piece of the quotient algebra."""
    mode = ArithMode(mode)
    engine = engine or get_membership_engine()
    words = (rs.rank * rs.rank) ** d
    if d < 2:
        return words
    rank = max(engine.rank(rs, d, point) for point in _points_for(mode, evals, seed))
    return words - rank


def sorted_word_count(r: int, d: int) -> int:
    """Number of lexicographically sorted words of length d in r^2 letters."""
    return comb(r * r + d - 1, d)
