"""
Bosonic Side and the Master Identity
====================================

X_i = sum_j a[i,j] x_j, G(m) = coefficient of x^m in X_1^{m_1} ... X_r^{m_r},
Bos(A) = sum of all G(m), truncated by total degree. The master check
certifies Ferm(A) * Bos(A) = 1 (and Bos(A) * Ferm(A) = 1) degree by degree
modulo the right-quantum ideal, or by rewriting to sorted words for
full-quantum matrices.

Usage:
    from src.bosonic import g_coefficient, master_verify

    g = g_coefficient(2, (1, 1))    # a11 a22 + q a12 a21
    outcome = master_verify(2, 4)
    assert outcome.verdict
"""

import logging
from functools import lru_cache
from itertools import permutations
from typing import Dict, Iterator, List, Optional, Tuple, Union

from sympy.polys.domains import ZZ
from sympy.polys.rings import ring

from src.coeffs import LaurentPoly
from src.ncpoly import (
    MixedPoly, coefficient_of_x, commutative_ring, format_poly, graded_component, specialize_q1_commutative,
)
from src.protocol import DEFAULT_SEED, ArithMode, CheckOutcome, DegreeCertificate, Flavor
from src.qdet import ferm, generic_matrix, inversions, principal_subsets, qdet, submatrix
from src.relations import relation_set, rewrite_normal_form, zero_mod_ideal

logger = logging.getLogger(__name__)

MultiIndex = Tuple[int, ...]

ORDERS = ("ferm*bos", "bos*ferm")


def multi_indices(r: int, total: int) -> Iterator[MultiIndex]:
    """Vectors of r nonnegative integers summing to ``total``, in lex order."""
    if r == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in multi_indices(r - 1, total - first):
            yield (first,) + rest


def multi_indices_upto(r: int, N: int) -> Iterator[MultiIndex]:
    for total in range(N + 1):
        yield from multi_indices(r, total)


@lru_cache(maxsize=None)
def make_X(r: int) -> Tuple[MixedPoly, ...]:
    if r < 1:
        raise ValueError(f"rank must be at least 1, got {r}")
    result = []
    for i in range(1, r + 1):
        total = MixedPoly.zero(r)
        for j in range(1, r + 1):
            xvec = [0] * r
            xvec[j - 1] = 1
            total = total + MixedPoly.monomial(r, ((i, j),), xvec)
        result.append(total)
    return tuple(result)


class XProducts:
    """
    Memoized products X_1^{m_1} ... X_r^{m_r}. The product at m extends the
    product at m - e_k by one more X_k, where k is the last nonzero index.
    """

    def __init__(self, r: int):
        self.r = r
        self._X = make_X(r)
        self._cache: Dict[MultiIndex, MixedPoly] = {(0,) * r: MixedPoly.one(r)}

    def product(self, m: MultiIndex) -> MixedPoly:
        m = tuple(m)
        if len(m) != self.r or any(k < 0 for k in m):
            raise ValueError(f"invalid multi-index {m} for rank {self.r}")
        cached = self._cache.get(m)
        if cached is not None:
            return cached
        last = max(k for k in range(self.r) if m[k] > 0)
        prefix = list(m)
        prefix[last] -= 1
        result = self.product(tuple(prefix)) * self._X[last]
        self._cache[m] = result
        return result


@lru_cache(maxsize=None)
def x_products(r: int) -> XProducts:
    return XProducts(r)


def g_coefficient(r: int, m: MultiIndex) -> MixedPoly:
    """Coefficient of the sorted monomial x^m in X_1^{m_1} ... X_r^{m_r}."""
    return coefficient_of_x(x_products(r).product(m), m)


def bos_truncated(r: int, N: int) -> MixedPoly:
    if N < 0:
        raise ValueError(f"truncation degree must be nonnegative, got {N}")
    total = MixedPoly.zero(r)
    for m in multi_indices_upto(r, N):
        total = total + g_coefficient(r, m)
    return total


def tr_sym(r: int, n: int) -> MixedPoly:
    """Sum of G(m) over |m| = n."""
    total = MixedPoly.zero(r)
    for m in multi_indices(r, n):
        total = total + g_coefficient(r, m)
    return total


def tr_ext(r: int, n: int) -> MixedPoly:
    """Sum of det_q(A_J) over |J| = n; zero for n > r."""
    A = generic_matrix(r)
    total = MixedPoly.zero(r)
    if n > r:
        return total
    for J in principal_subsets(r, n):
        total = total + qdet(submatrix(A, J, J))
    return total


def _certify_component(component: MixedPoly, d: int, flavor: Flavor, mode: ArithMode,
                       evals: int, seed: int, order: str) -> DegreeCertificate:
    rs = relation_set(component.rank, flavor)
    if flavor == Flavor.FULL_QUANTUM:
        normal_form = rewrite_normal_form(component, rs)
        return DegreeCertificate(
            degree=d, verdict=normal_form.is_zero(), method="rewrite", order=order,
            residual_terms=None if normal_form.is_zero() else format_poly(normal_form),
        )
    certificates = zero_mod_ideal(component, rs, mode, evals, seed, order=order)
    if not certificates:
        return DegreeCertificate(degree=d, verdict=True, method="exact-zero", order=order)
    return certificates[0]


def master_verify(r: int, N: int, flavor: Union[Flavor, str] = Flavor.RIGHT_QUANTUM,
                  mode: Union[ArithMode, str] = ArithMode.PROBABILISTIC, evals: int = 3,
                  seed: int = DEFAULT_SEED, both_orders: bool = True) -> CheckOutcome:
    """
    Certify Ferm(A) * Bos(A) = 1 through degree N, and the opposite order too.

    Each order stops at its first failing degree; the failing certificate
    carries the residual in the textual monomial grammar.

    Args:
        r: matrix rank
        N: truncation degree
        flavor: right-quantum (ideal membership) or full-quantum (rewriting)
        mode: arithmetic for ideal membership
        evals: evaluation points in probabilistic mode
        seed: seed for the evaluation points
        both_orders: also check Bos(A) * Ferm(A)

    Returns:
        CheckOutcome with one certificate per (order, degree)
    """
    flavor = Flavor(flavor)
    mode = ArithMode(mode)
    if flavor == Flavor.LEFT_QUANTUM:
        raise ValueError("the master identity is verified for right- and full-quantum matrices only")
    fermionic = ferm(generic_matrix(r))
    bosonic = bos_truncated(r, N)
    factors = {"ferm*bos": (fermionic, bosonic), "bos*ferm": (bosonic, fermionic)}

    certificates: List[DegreeCertificate] = []
    failed_degree: Optional[int] = None
    for order in ORDERS if both_orders else ORDERS[:1]:
        left, right = factors[order]
        product = left.mul_truncated(right, N)
        constant = graded_component(product, 0)
        constant_ok = constant == MixedPoly.one(r)
        certificates.append(DegreeCertificate(
            degree=0, verdict=constant_ok, method="constant", order=order,
            residual_terms=None if constant_ok else format_poly(constant),
        ))
        if not constant_ok:
            failed_degree = 0
            continue
        for d in range(1, N + 1):
            certificate = _certify_component(graded_component(product, d), d, flavor, mode, evals, seed, order)
            certificates.append(certificate)
            logger.debug("%s r=%d degree %d: %s", order, r, d, certificate.verdict)
            if not certificate.verdict:
                failed_degree = d if failed_degree is None else min(failed_degree, d)
                break

    outcome = CheckOutcome.from_certificates(certificates)
    if failed_degree is not None:
        outcome.info["failed_degree"] = failed_degree
    logger.info("master identity r=%d N=%d %s: %s", r, N, flavor.value, outcome.verdict)
    return outcome


# ---------------------------------------------------------------------------
# Classical limit
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _classical_ring(r: int):
    names = [f"a{i}_{j}" for i in range(1, r + 1) for j in range(1, r + 1)]
    names += [f"x{j}" for j in range(1, r + 1)]
    R, *gens = ring(names, ZZ)
    return R, gens[: r * r], gens[r * r:]


def _truncate(f, N: int, width: int):
    return f.ring.from_dict({m: c for m, c in f.terms() if sum(m[:width]) <= N})


def classical_series(r: int, N: int) -> Tuple[object, object]:
    """
    Commutative q = 1 images of both sides through degree N, as elements of
    the ring of a's from ``ncpoly.commutative_ring``: (sum of G(m), 1/det(I - A)).
    """
    R, a, x = _classical_ring(r)
    width = r * r
    target = commutative_ring(r)

    def project(f):
        return target.from_dict({m[:width]: c for m, c in f.terms()})

    # bosonic side: coefficient of x^m in prod_i (sum_j a_ij x_j)^{m_i}
    linear_forms = [sum((a[(i * r) + j] * x[j] for j in range(r)), R.zero) for i in range(r)]
    bosonic = R.zero
    for m in multi_indices_upto(r, N):
        product = R.one
        for i, power in enumerate(m):
            product *= linear_forms[i] ** power
        bosonic += R.from_dict({e: c for e, c in product.terms() if tuple(e[width:]) == tuple(m)})

    # fermionic side: det(I - A) by the Leibniz formula, then a geometric series
    identity_minus_a = [
        [(R.one if i == j else R.zero) - a[i * r + j] for j in range(r)] for i in range(r)
    ]
    determinant = R.zero
    for perm in permutations(range(r)):
        term = R.one if inversions(perm) % 2 == 0 else -R.one
        for col in range(r):
            term *= identity_minus_a[perm[col]][col]
        determinant += term
    h = R.one - determinant
    inverse = R.one
    power = R.one
    for _ in range(N):
        power = _truncate(power * h, N, width)
        inverse += power
    return project(bosonic), project(_truncate(inverse, N, width))


def classical_check(r: int, N: int, with_image: bool = True) -> CheckOutcome:
    """
    sum_{|m| <= N} G(m) at q = 1 equals 1/det(I - A) through degree N, coefficientwise.

    With ``with_image`` the q = 1 abelianized image of the noncommutative
    Bos(A) is compared with the same commutative series.
    """
    bosonic, fermionic = classical_series(r, N)
    difference = bosonic - fermionic
    certificates = [DegreeCertificate(
        degree=N, verdict=not difference, method="commutative-series",
        residual_terms=None if not difference else str(difference),
    )]
    if with_image:
        image = specialize_q1_commutative(bos_truncated(r, N)) - bosonic
        certificates.append(DegreeCertificate(
            degree=N, verdict=not image, method="q1-image", component="Bos(A) at q = 1",
            residual_terms=None if not image else str(image),
        ))
    return CheckOutcome.from_certificates(certificates, terms=len(bosonic.terms()))


# ---------------------------------------------------------------------------
# Inclusion-exclusion and trace series
# ---------------------------------------------------------------------------

def support_series(r: int, J: Tuple[int, ...], N: int) -> MixedPoly:
    """S_{J,N}: sum of G(m) over |m| <= N with m_i = 0 outside J."""
    total = MixedPoly.zero(r)
    for m in multi_indices_upto(r, N):
        if all(m[i - 1] == 0 for i in range(1, r + 1) if i not in J):
            total = total + g_coefficient(r, m)
    return total


def inclusion_exclusion_check(r: int, N: int, mode: Union[ArithMode, str] = ArithMode.PROBABILISTIC,
                              evals: int = 3, seed: int = DEFAULT_SEED) -> CheckOutcome:
    """sum_J (-1)^{|J|} Ferm(A_J) S_{J,N} vanishes modulo the ideal through degree N."""
    A = generic_matrix(r)
    total = MixedPoly.zero(r)
    for J in principal_subsets(r):
        term = ferm(submatrix(A, J, J)).mul_truncated(support_series(r, J, N), N)
        total = total + (term.scale(LaurentPoly.const(-1)) if len(J) % 2 else term)
    rs = relation_set(r, Flavor.RIGHT_QUANTUM)
    truncated = MixedPoly.zero(r)
    for d in range(N + 1):
        truncated = truncated + graded_component(total, d)
    return CheckOutcome.from_certificates(zero_mod_ideal(truncated, rs, mode, evals, seed))


def boson_fermion_check(r: int, N: int, flavor: Union[Flavor, str] = Flavor.RIGHT_QUANTUM,
                        mode: Union[ArithMode, str] = ArithMode.PROBABILISTIC,
                        evals: int = 3, seed: int = DEFAULT_SEED) -> CheckOutcome:
    """
    Trace-series form: the traces reassemble Bos and Ferm exactly, and
    (sum (-1)^n tr_ext) * (sum tr_sym) = 1 through degree N modulo the ideal.
    """
    flavor = Flavor(flavor)
    symmetric = MixedPoly.zero(r)
    for n in range(N + 1):
        symmetric = symmetric + tr_sym(r, n)
    exterior = MixedPoly.zero(r)
    for n in range(r + 1):
        piece = tr_ext(r, n)
        exterior = exterior + (piece.scale(LaurentPoly.const(-1)) if n % 2 else piece)

    certificates = [
        DegreeCertificate(degree=N, verdict=symmetric == bos_truncated(r, N), method="exact",
                          component="sum tr_sym = Bos"),
        DegreeCertificate(degree=r, verdict=exterior == ferm(generic_matrix(r)), method="exact",
                          component="sum (-1)^n tr_ext = Ferm"),
    ]
    product = exterior.mul_truncated(symmetric, N)
    residual = product - MixedPoly.one(r)
    for d in range(N + 1):
        component = graded_component(residual, d)
        if d == 0:
            certificates.append(DegreeCertificate(degree=0, verdict=component.is_zero(), method="constant",
                                                  component="trace product"))
            continue
        certificate = _certify_component(component, d, flavor, ArithMode(mode), evals, seed, "ferm*bos")
        certificate.component = "trace product"
        certificates.append(certificate)
    return CheckOutcome.from_certificates(certificates)
