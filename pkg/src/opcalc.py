"""
Difference-Operator Calculus
============================

Operators on functions of a multi-index m = (m_1, ..., m_r) generated by the
shifts M_i (M_i F(m) = F(m + e_i)), the multipliers Q_i = q^{m_i}, and the
generators a[i,j]. The only non-commutation is M_i Q_i = q Q_i M_i, so every
operator monomial is kept in the canonical order Q^v M^u a-word, and

    (v1, u1, w1) * (v2, u2, w2) = q^{u1 . v2} (v1 + v2, u1 + u2, w1 w2)

Hosts the operator matrix B whose rows annihilate the discrete function H,
the lemmas about X_i and B, and the pointwise application of operators to
discrete functions.

Usage:
    from src.opcalc import OpPoly, build_B
    from src.qdet import qdet

    M1 = OpPoly.shift(2, 1)
    Q1 = OpPoly.multiplier(2, (1, 0))
    print(M1 * Q1)                  # (1*q^1) Q^(1,0) M^(1,0)
    det_B = qdet(build_B(2))        # M1 M2 - a22 M1 - a11 M2 + det_q(A)
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product
from typing import Callable, Dict, Iterable, List, NamedTuple, Optional, Tuple, Union

from src.bosonic import MultiIndex, g_coefficient, make_X, x_products
from src.coeffs import ONE, LaurentPoly, Q, iter_terms
from src.ncpoly import AWord, MixedPoly, RankMismatchError, format_poly, x_components
from src.protocol import DEFAULT_SEED, ArithMode, CheckOutcome, DegreeCertificate
from src.qdet import NCMatrix, ferm, generic_matrix, principal_subsets, qdet, submatrix
from src.relations import RelationSet, minors, right_quantum_relations, zero_mod_ideal

logger = logging.getLogger(__name__)

QVec = Tuple[int, ...]
MVec = Tuple[int, ...]
DiscreteFunction = Callable[[MultiIndex], MixedPoly]


class OpMonomial(NamedTuple):
    qvec: QVec
    mvec: MVec
    aword: AWord

    def sort_key(self):
        return (len(self.aword), self.mvec, self.qvec, self.aword)


def _dot(u: Iterable[int], v: Iterable[int]) -> int:
    return sum(a * b for a, b in zip(u, v))


def _add(u: Tuple[int, ...], v: Tuple[int, ...]) -> Tuple[int, ...]:
    return tuple(a + b for a, b in zip(u, v))


class OpPoly:
    """Finite sum of operator monomials Q^v M^u w with Laurent coefficients."""

    __slots__ = ("rank", "_terms")

    def __init__(self, rank: int, terms: Optional[Dict[OpMonomial, LaurentPoly]] = None):
        self.rank = rank
        self._terms: Dict[OpMonomial, LaurentPoly] = {}
        for monomial, coefficient in (terms or {}).items():
            qvec, mvec, aword = monomial
            if len(qvec) != rank or len(mvec) != rank:
                raise RankMismatchError(f"operator exponents {qvec}, {mvec} do not have length {rank}")
            if any(u < 0 for u in mvec):
                raise ValueError(f"shift exponents must be nonnegative, got {mvec}")
            coefficient = LaurentPoly.coerce(coefficient)
            if coefficient:
                self._terms[OpMonomial(tuple(qvec), tuple(mvec), tuple(aword))] = coefficient

    @classmethod
    def _raw(cls, rank: int, terms: Dict[OpMonomial, LaurentPoly]) -> "OpPoly":
        obj = cls.__new__(cls)
        obj.rank = rank
        obj._terms = terms
        return obj

    @classmethod
    def zero(cls, rank: int) -> "OpPoly":
        return cls._raw(rank, {})

    @classmethod
    def one(cls, rank: int) -> "OpPoly":
        zero = (0,) * rank
        return cls._raw(rank, {OpMonomial(zero, zero, ()): ONE})

    @classmethod
    def shift(cls, rank: int, i: int, power: int = 1) -> "OpPoly":
        """M_i^power."""
        mvec = [0] * rank
        mvec[i - 1] = power
        return cls(rank, {OpMonomial((0,) * rank, tuple(mvec), ()): ONE})

    @classmethod
    def shifts(cls, rank: int, mvec: Iterable[int]) -> "OpPoly":
        return cls(rank, {OpMonomial((0,) * rank, tuple(mvec), ()): ONE})

    @classmethod
    def multiplier(cls, rank: int, qvec: Iterable[int]) -> "OpPoly":
        """Q^qvec, the operator multiplying F(m) by q^{qvec . m}."""
        return cls(rank, {OpMonomial(tuple(qvec), (0,) * rank, ()): ONE})

    @classmethod
    def letter(cls, rank: int, i: int, j: int) -> "OpPoly":
        return cls.lift(MixedPoly.letter(rank, i, j))

    @classmethod
    def lift(cls, p: MixedPoly) -> "OpPoly":
        """Embed a pure a-polynomial as a multiplication operator."""
        zero = (0,) * p.rank
        return cls._raw(p.rank, {OpMonomial(zero, zero, aword): c for aword, c in p.words().items()})

    def items(self) -> List[Tuple[OpMonomial, LaurentPoly]]:
        return sorted(self._terms.items(), key=lambda item: item[0].sort_key())

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def a_components(self) -> Dict[Tuple[QVec, MVec], MixedPoly]:
        """Pure a-coefficients keyed by (qvec, mvec); distinct keys are independent operators."""
        parts: Dict[Tuple[QVec, MVec], Dict[AWord, LaurentPoly]] = {}
        for m, c in self._terms.items():
            parts.setdefault((m.qvec, m.mvec), {})[m.aword] = c
        return {key: MixedPoly.from_words(self.rank, words) for key, words in sorted(parts.items())}

    def set_shifts_to_one(self) -> "OpPoly":
        """Image under M_i -> 1."""
        zero = (0,) * self.rank
        result = OpPoly.zero(self.rank)
        for m, c in self._terms.items():
            result = result + OpPoly._raw(self.rank, {OpMonomial(m.qvec, zero, m.aword): c})
        return result

    def _check_rank(self, other: "OpPoly") -> None:
        if self.rank != other.rank:
            raise RankMismatchError(f"rank {self.rank} vs rank {other.rank}")

    def __add__(self, other: "OpPoly") -> "OpPoly":
        if not isinstance(other, OpPoly):
            return NotImplemented
        self._check_rank(other)
        result = dict(self._terms)
        for monomial, coefficient in other._terms.items():
            total = result[monomial] + coefficient if monomial in result else coefficient
            if total:
                result[monomial] = total
            else:
                result.pop(monomial, None)
        return OpPoly._raw(self.rank, result)

    def __neg__(self) -> "OpPoly":
        return OpPoly._raw(self.rank, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other: "OpPoly") -> "OpPoly":
        if not isinstance(other, OpPoly):
            return NotImplemented
        return self + (-other)

    def scale(self, factor: Union[int, LaurentPoly]) -> "OpPoly":
        factor = LaurentPoly.coerce(factor)
        if not factor:
            return OpPoly.zero(self.rank)
        return OpPoly._raw(self.rank, {m: c * factor for m, c in self._terms.items()})

    def __mul__(self, other: "OpPoly") -> "OpPoly":
        if not isinstance(other, OpPoly):
            return NotImplemented
        return op_mul(self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, OpPoly):
            return NotImplemented
        return self.rank == other.rank and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.rank, frozenset(self._terms.items())))

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        chunks = []
        for m, c in self.items():
            parts = [f"({c})"]
            if any(m.qvec):
                parts.append("Q^(" + ",".join(map(str, m.qvec)) + ")")
            if any(m.mvec):
                parts.append("M^(" + ",".join(map(str, m.mvec)) + ")")
            parts += [f"a[{i},{j}]" for i, j in m.aword]
            chunks.append(" ".join(parts))
        return " + ".join(chunks)

    def __repr__(self) -> str:
        return f"OpPoly(rank={self.rank}, {self})"


def op_mul(p1: OpPoly, p2: OpPoly) -> OpPoly:
    """Product in the operator algebra; M^u Q^v = q^{u . v} Q^v M^u."""
    p1._check_rank(p2)
    accumulator: Dict[OpMonomial, Dict[int, int]] = {}
    for m1, c1 in p1._terms.items():
        for m2, c2 in p2._terms.items():
            shift = _dot(m1.mvec, m2.qvec)
            key = OpMonomial(_add(m1.qvec, m2.qvec), _add(m1.mvec, m2.mvec), m1.aword + m2.aword)
            bucket = accumulator.setdefault(key, {})
            for e1, a in iter_terms(c1):
                for e2, b in iter_terms(c2):
                    e = e1 + e2 + shift
                    bucket[e] = bucket.get(e, 0) + a * b
    terms: Dict[OpMonomial, LaurentPoly] = {}
    for key, bucket in accumulator.items():
        clean = {e: c for e, c in bucket.items() if c}
        if clean:
            terms[key] = LaurentPoly._raw(clean)
    return OpPoly._raw(p1.rank, terms)


def op_zero_mod_ideal(p: OpPoly, rs: RelationSet, mode: Union[ArithMode, str] = ArithMode.PROBABILISTIC,
                      evals: int = 3, seed: int = DEFAULT_SEED, component: Optional[str] = None
                      ) -> List[DegreeCertificate]:
    """Certify p = 0: every (Q, M) component's a-coefficient lies in the ideal."""
    certificates: List[DegreeCertificate] = []
    for (qvec, mvec), part in p.a_components().items():
        label = f"Q^{qvec} M^{mvec}" if component is None else f"{component}: Q^{qvec} M^{mvec}"
        certificates += zero_mod_ideal(part, rs, mode, evals, seed, component=label)
    return certificates


# ---------------------------------------------------------------------------
# The matrix B
# ---------------------------------------------------------------------------

def b_qvec(r: int, i: int, j: int) -> QVec:
    """Exponent vector of the q^{...} factor of b[i,j]: +-1 at i and j, +-2 strictly between."""
    vec = [0] * r
    if i == j:
        return tuple(vec)
    sign = 1 if j > i else -1
    lo, hi = min(i, j), max(i, j)
    vec[lo - 1] = vec[hi - 1] = sign
    for k in range(lo + 1, hi):
        vec[k - 1] = 2 * sign
    return tuple(vec)


@lru_cache(maxsize=None)
def build_B(r: int) -> NCMatrix[OpPoly]:
    """b[i,i] = M_i - a[i,i]; b[i,j] = -Q^{b_qvec(i, j)} a[i,j] off the diagonal."""
    if r < 1:
        raise ValueError(f"rank must be at least 1, got {r}")
    rows = []
    for i in range(1, r + 1):
        row = []
        for j in range(1, r + 1):
            if i == j:
                row.append(OpPoly.shift(r, i) - OpPoly.letter(r, i, i))
            else:
                row.append(-(OpPoly.multiplier(r, b_qvec(r, i, j)) * OpPoly.letter(r, i, j)))
        rows.append(tuple(row))
    return NCMatrix(tuple(rows), OpPoly.one(r))


def signed_minor_expansion(r: int) -> OpPoly:
    """sum over J of (-1)^{|J|} det_q(A_J) M_{complement of J}."""
    A = generic_matrix(r)
    total = OpPoly.zero(r)
    for J in principal_subsets(r):
        complement = [0 if k in J else 1 for k in range(1, r + 1)]
        term = OpPoly.lift(qdet(submatrix(A, J, J))) * OpPoly.shifts(r, complement)
        total = total + (term.scale(-1) if len(J) % 2 else term)
    return total


# ---------------------------------------------------------------------------
# Lemmas on X_i and B
# ---------------------------------------------------------------------------

def lemma1_check(r: int, mode: Union[ArithMode, str] = ArithMode.PROBABILISTIC,
                 evals: int = 3, seed: int = DEFAULT_SEED) -> CheckOutcome:
    """X_j X_i - q X_i X_j has every x-coefficient in the right-quantum ideal, for all i < j."""
    rs = right_quantum_relations(r)
    X = make_X(r)
    certificates: List[DegreeCertificate] = []
    for i, j in combinations(range(1, r + 1), 2):
        residual = X[j - 1] * X[i - 1] - (X[i - 1] * X[j - 1]).scale(Q)
        for xvec, part in x_components(residual).items():
            certificates += zero_mod_ideal(part, rs, mode, evals, seed, component=f"X{j}X{i} at x^{xvec}")
    return CheckOutcome.from_certificates(certificates, pairs=r * (r - 1) // 2)


def _scaled_X(r: int, i: int, j: int, m: int) -> MixedPoly:
    total = MixedPoly.zero(r)
    for k in range(1, r + 1):
        c = -1 if k < i else (1 if k > i else 0)
        xvec = [0] * r
        xvec[k - 1] = 1
        total = total + MixedPoly.monomial(r, ((j, k),), xvec, LaurentPoly.monomial(c * m))
    return total


def lemma2_check(r: int, i: int, j: int, m: int) -> CheckOutcome:
    """
    x_i^{-m} X_j = X_j' x_i^{-m} exactly, where X_j' scales a[j,k] by q^{-m}
    for k < i and by q^{m} for k > i.
    """
    if not (1 <= i <= r and 1 <= j <= r):
        raise ValueError(f"need 1 <= i, j <= {r}, got {i}, {j}")
    if m < 1:
        raise ValueError(f"m must be positive, got {m}")
    X = make_X(r)
    x_power = MixedPoly.x(r, i, -m)
    difference = x_power * X[j - 1] - _scaled_X(r, i, j, m) * x_power
    certificate = DegreeCertificate(
        degree=1, verdict=difference.is_zero(), method="exact",
        component=f"i={i} j={j} m={m}",
        residual_terms=None if difference.is_zero() else format_poly(difference),
    )
    return CheckOutcome.from_certificates([certificate])


def b_right_quantum_check(r: int, mode: Union[ArithMode, str] = ArithMode.PROBABILISTIC,
                          evals: int = 3, seed: int = DEFAULT_SEED) -> CheckOutcome:
    """Every 2x2 submatrix of B satisfies the right-quantum relations, a-parts modulo the ideal."""
    if r < 2:
        raise ValueError(f"B has no 2x2 submatrices for rank {r}")
    rs = right_quantum_relations(r)
    B = build_B(r)
    q_inv = Q ** -1
    certificates: List[DegreeCertificate] = []
    for i, i2, j, j2 in minors(r):
        a, b, c, d = B.entry(i, j), B.entry(i, j2), B.entry(i2, j), B.entry(i2, j2)
        residuals = {
            f"column {j}": c * a - (a * c).scale(Q),
            f"column {j2}": d * b - (b * d).scale(Q),
            "cross": a * d - d * a - (c * b).scale(q_inv) + (b * c).scale(Q),
        }
        for label, residual in residuals.items():
            certificates += op_zero_mod_ideal(
                residual, rs, mode, evals, seed, component=f"rows {i},{i2} cols {j},{j2} {label}",
            )
    return CheckOutcome.from_certificates(certificates)


def detq_B_expansion_check(r: int, mode: Union[ArithMode, str] = ArithMode.PROBABILISTIC,
                           evals: int = 3, seed: int = DEFAULT_SEED, max_rank: int = 3) -> CheckOutcome:
    """
    (a) det_q(B) = sum_J (-1)^{|J|} det_q(A_J) M_{complement of J} modulo the ideal;
    (b) det_q(B) with every M_i -> 1 equals Ferm(A) modulo the ideal.

    Every Q-multiplier must cancel in det_q(B) itself, with no relations used.
    Whether (a) already holds in the free algebra is reported in ``info``.
    """
    if not 1 <= r <= max_rank:
        raise ValueError(f"det_q(B) is expanded for 1 <= r <= {max_rank}, got {r}")
    rs = right_quantum_relations(r)
    det_B = qdet(build_B(r))
    difference = det_B - signed_minor_expansion(r)
    certificates = op_zero_mod_ideal(difference, rs, mode, evals, seed, component="expansion")

    at_one = det_B.set_shifts_to_one() - OpPoly.lift(ferm(generic_matrix(r)))
    certificates += op_zero_mod_ideal(at_one, rs, mode, evals, seed, component="shifts at one")

    leftover = [qvec for qvec, _ in det_B.a_components() if any(qvec)]
    q_parts_cancel = not leftover
    certificates.append(DegreeCertificate(
        degree=r, verdict=q_parts_cancel, method="exact", component="Q-parts cancel",
        residual_terms=None if q_parts_cancel else ", ".join(f"Q^{qvec}" for qvec in sorted(set(leftover))),
    ))
    logger.debug("det_q(B) for r=%d has %d terms", r, len(det_B))
    return CheckOutcome.from_certificates(
        certificates, exact_free_algebra=difference.is_zero(), q_parts_cancel=q_parts_cancel,
    )


# ---------------------------------------------------------------------------
# Discrete functions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DiscreteStateH:
    """H(m; x) = x_r^{-m_r} ... x_1^{-m_1} X_1^{m_1} ... X_r^{m_r}."""

    m: MultiIndex
    value: MixedPoly


def _validate_index(r: int, m: Iterable[int]) -> MultiIndex:
    m = tuple(m)
    if len(m) != r or any(k < 0 for k in m):
        raise ValueError(f"invalid multi-index {m} for rank {r}")
    return m


@lru_cache(maxsize=None)
def _build_H(r: int, m: MultiIndex) -> DiscreteStateH:
    prefix = MixedPoly.one(r)
    for i in range(r, 0, -1):
        if m[i - 1]:
            prefix = prefix * MixedPoly.x(r, i, -m[i - 1])
    return DiscreteStateH(m, prefix * x_products(r).product(m))


def build_H(r: int, m: Iterable[int]) -> DiscreteStateH:
    return _build_H(r, _validate_index(r, m))


def apply_operator(op: OpPoly, F: DiscreteFunction, m: Iterable[int]) -> MixedPoly:
    """(op F)(m) = sum c q^{v . m} w F(m + u) over the terms c Q^v M^u w of ``op``."""
    m = _validate_index(op.rank, m)
    total = MixedPoly.zero(op.rank)
    for monomial, coefficient in op.items():
        value = F(_add(m, monomial.mvec))
        if not value:
            continue
        factor = MixedPoly.monomial(op.rank, monomial.aword, None, coefficient.shift(_dot(monomial.qvec, m)))
        total = total + factor * value
    return total


def annihilation_check(r: int, m: Iterable[int], i: int,
                       mode: Union[ArithMode, str] = ArithMode.PROBABILISTIC,
                       evals: int = 3, seed: int = DEFAULT_SEED) -> CheckOutcome:
    """
    (P_i H)(m) = sum_j x_j (b[i,j] H)(m) vanishes modulo the right-quantum
    ideal, one certificate per x-monomial.
    """
    if not 1 <= i <= r:
        raise ValueError(f"need 1 <= i <= {r}, got {i}")
    m = _validate_index(r, m)
    B = build_B(r)

    def H(index: MultiIndex) -> MixedPoly:
        return _build_H(r, index).value

    total = MixedPoly.zero(r)
    for j in range(1, r + 1):
        total = total + MixedPoly.x(r, j) * apply_operator(B.entry(i, j), H, m)
    rs = right_quantum_relations(r)
    certificates: List[DegreeCertificate] = []
    for xvec, part in x_components(total).items():
        certificates += zero_mod_ideal(part, rs, mode, evals, seed, component=f"P{i} H{m} at x^{xvec}")
    return CheckOutcome.from_certificates(certificates, exact_zero=total.is_zero())


def detq_B_annihilates_G_check(r: int, bound: int, max_degree: Optional[int] = None,
                               mode: Union[ArithMode, str] = ArithMode.PROBABILISTIC,
                               evals: int = 3, seed: int = DEFAULT_SEED) -> CheckOutcome:
    """
    sum_J (-1)^{|J|} det_q(A_J) M_{complement of J} applied to m -> G(m) lies in
    the ideal for every m with entries at most ``bound`` (and |m| + r at most
    ``max_degree`` when given).
    """
    op = signed_minor_expansion(r)
    rs = right_quantum_relations(r)

    def G(index: MultiIndex) -> MixedPoly:
        return g_coefficient(r, index)

    certificates: List[DegreeCertificate] = []
    points = 0
    for m in product(range(bound + 1), repeat=r):
        if max_degree is not None and sum(m) + r > max_degree:
            continue
        points += 1
        certificates += zero_mod_ideal(apply_operator(op, G, m), rs, mode, evals, seed, component=f"m={m}")
    return CheckOutcome.from_certificates(certificates, points=points)
