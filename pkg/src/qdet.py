"""
Quantum Determinants
====================

det_q(B) = sum over permutations pi of (-q)^{-inv(pi)} b[pi1,1] b[pi2,2] ... b[pin,n],
with entries multiplied in column order. Works for any entry algebra that
provides ``+``, ``*`` and ``scale`` by a Laurent polynomial, so the same code
serves the generic symbol matrix and the operator matrix B.

Also hosts Ferm(A) and the determinantal lemmas: last-column expansion,
column swaps, and vanishing for a repeated column.

Usage:
    from src.qdet import generic_matrix, qdet, ferm

    A = generic_matrix(2)
    print(qdet(A))     # (1*q^0) a[1,1] a[2,2] + (-1*q^-1) a[2,1] a[1,2]
"""

import logging
from dataclasses import dataclass
from functools import lru_cache, reduce
from itertools import combinations, permutations
from operator import mul
from typing import Generic, Iterable, Iterator, List, Optional, Protocol, Sequence, Tuple, TypeVar, Union

from src.coeffs import LaurentPoly, signed_q_power
from src.ncpoly import MixedPoly
from src.protocol import DEFAULT_SEED, ArithMode, CheckOutcome, DegreeCertificate
from src.relations import RelationSet, right_quantum_relations, zero_mod_ideal

logger = logging.getLogger(__name__)

SubsetIndex = Tuple[int, ...]


class AlgebraElement(Protocol):
    def __add__(self, other): ...
    def __mul__(self, other): ...
    def scale(self, factor: LaurentPoly): ...


Entry = TypeVar("Entry", bound=AlgebraElement)


@dataclass(frozen=True)
class NCMatrix(Generic[Entry]):
    """Square matrix over a noncommutative algebra; ``unit`` is that algebra's 1."""

    entries: Tuple[Tuple[Entry, ...], ...]
    unit: Entry

    def __post_init__(self):
        n = len(self.entries)
        if any(len(row) != n for row in self.entries):
            raise ValueError("NCMatrix must be square")

    @property
    def rank(self) -> int:
        return len(self.entries)

    def entry(self, i: int, j: int) -> Entry:
        """1-based access."""
        return self.entries[i - 1][j - 1]

    def column(self, j: int) -> Tuple[Entry, ...]:
        return tuple(row[j - 1] for row in self.entries)

    def with_columns(self, order: Sequence[int]) -> "NCMatrix[Entry]":
        """Matrix whose k-th column is column ``order[k]`` of this one (repeats allowed)."""
        return NCMatrix(
            tuple(tuple(row[j - 1] for j in order) for row in self.entries),
            self.unit,
        )


@lru_cache(maxsize=None)
def generic_matrix(r: int) -> NCMatrix[MixedPoly]:
    """The r x r matrix of free generators a[i,j]."""
    entries = tuple(
        tuple(MixedPoly.letter(r, i, j) for j in range(1, r + 1))
        for i in range(1, r + 1)
    )
    return NCMatrix(entries, MixedPoly.one(r))


def inversions(perm: Sequence[int]) -> int:
    return sum(1 for s, t in combinations(range(len(perm)), 2) if perm[s] > perm[t])


def permutations_with_inversions(n: int) -> Iterator[Tuple[Tuple[int, ...], int]]:
    """Permutations of 1..n in lexicographic order with their inversion counts."""
    for perm in permutations(range(1, n + 1)):
        yield perm, inversions(perm)


def qdet(M: NCMatrix[Entry]) -> Entry:
    """Quantum determinant; the 0 x 0 matrix has determinant 1."""
    n = M.rank
    if n == 0:
        return M.unit
    total: Optional[Entry] = None
    for perm, inv in permutations_with_inversions(n):
        term = reduce(mul, (M.entries[perm[col] - 1][col] for col in range(n)))
        term = term.scale(signed_q_power(-inv))
        total = term if total is None else total + term
    return total


def subset_index(values: Iterable[int], r: Optional[int] = None) -> SubsetIndex:
    index = tuple(values)
    if list(index) != sorted(set(index)):
        raise ValueError(f"subset index {index} must be sorted and duplicate-free")
    if r is not None and index and not (1 <= index[0] and index[-1] <= r):
        raise ValueError(f"subset index {index} out of range 1..{r}")
    return index


def submatrix(A: NCMatrix[Entry], rows: Iterable[int], cols: Iterable[int]) -> NCMatrix[Entry]:
    """Rows ``rows`` and columns ``cols`` of ``A`` in their induced order."""
    rows = subset_index(rows, A.rank)
    cols = subset_index(cols, A.rank)
    if len(rows) != len(cols):
        raise ValueError(f"cannot take a {len(rows)} x {len(cols)} square submatrix")
    return NCMatrix(
        tuple(tuple(A.entries[i - 1][j - 1] for j in cols) for i in rows),
        A.unit,
    )


def principal_subsets(r: int, size: Optional[int] = None) -> Iterator[SubsetIndex]:
    sizes = range(r + 1) if size is None else [size]
    for n in sizes:
        yield from combinations(range(1, r + 1), n)


def ferm(A: NCMatrix[Entry]) -> Entry:
    """Ferm(A) = sum over J of (-1)^{|J|} det_q(A_J)."""
    total = A.unit
    for J in principal_subsets(A.rank):
        if not J:
            continue
        minor = qdet(submatrix(A, J, J))
        total = total + (minor.scale(LaurentPoly.const(-1)) if len(J) % 2 else minor)
    return total


def last_column_minor(A: NCMatrix[Entry], i: int) -> NCMatrix[Entry]:
    """Delete row ``i`` and the last column."""
    n = A.rank
    return submatrix(A, [k for k in range(1, n + 1) if k != i], range(1, n))


def last_column_expansion(A: NCMatrix[Entry], column: Optional[Sequence[Entry]] = None) -> Entry:
    """
    sum_i (-q)^{i-n} det_q(A_i) c_i, where c is the last column of ``A``
    unless another column is supplied.
    """
    n = A.rank
    column = column if column is not None else A.column(n)
    total: Optional[Entry] = None
    for i in range(1, n + 1):
        term = (qdet(last_column_minor(A, i)) * column[i - 1]).scale(signed_q_power(i - n))
        total = term if total is None else total + term
    return total


def column_expansion_check(n: int, max_rank: int = 4) -> bool:
    """Last-column expansion as an exact identity in the free algebra."""
    if n < 1 or n > max_rank:
        raise ValueError(f"column expansion is checked for 1 <= n <= {max_rank}, got {n}")
    A = generic_matrix(n)
    return qdet(A) == last_column_expansion(A)


def adjacent_swap_path(i: int, j: int) -> List[int]:
    """
    Positions p (swap p, p+1) turning the identity column order into the
    transposition of columns i < j; each step exchanges two columns that are
    still in their original relative order.
    """
    if not i < j:
        raise ValueError(f"need i < j, got {i}, {j}")
    forward = list(range(i, j))
    backward = list(range(j - 2, i - 1, -1))
    return forward + backward


def column_swap_check(r: int, i: int, j: int, rs: Optional[RelationSet] = None,
                      mode: Union[ArithMode, str] = ArithMode.PROBABILISTIC,
                      evals: int = 3, seed: int = DEFAULT_SEED) -> CheckOutcome:
    """
    det_q(A') = (-q)^{-s} det_q(A) modulo the ideal, where A' swaps columns i
    and j and s is the number of adjacent swaps in the iteration. Every
    intermediate adjacent step is certified too.
    """
    if not 1 <= i < j <= r:
        raise ValueError(f"need 1 <= i < j <= {r}, got {i}, {j}")
    rs = rs or right_quantum_relations(r)
    A = generic_matrix(r)
    path = adjacent_swap_path(i, j)

    order = list(range(1, r + 1))
    previous = qdet(A)
    certificates: List[DegreeCertificate] = []
    for step, position in enumerate(path, start=1):
        order[position - 1], order[position] = order[position], order[position - 1]
        current = qdet(A.with_columns(order))
        residual = current - previous.scale(signed_q_power(-1))
        certificates += zero_mod_ideal(residual, rs, mode, evals, seed, component=f"step {step}")
        previous = current

    swapped = list(range(1, r + 1))
    swapped[i - 1], swapped[j - 1] = j, i
    assert order == swapped
    residual = qdet(A.with_columns(swapped)) - qdet(A).scale(signed_q_power(-len(path)))
    certificates += zero_mod_ideal(residual, rs, mode, evals, seed, component="composite")
    return CheckOutcome.from_certificates(certificates, exponent=len(path))


def equal_column_vanishing_check(r: int, j: int, rs: Optional[RelationSet] = None,
                                 mode: Union[ArithMode, str] = ArithMode.PROBABILISTIC,
                                 evals: int = 3, seed: int = DEFAULT_SEED) -> CheckOutcome:
    """sum_i (-q)^{i-r} det_q(A_i) a[i,j] lies in the ideal for every column j < r."""
    if not 1 <= j < r:
        raise ValueError(f"need 1 <= j < {r}, got {j}")
    rs = rs or right_quantum_relations(r)
    A = generic_matrix(r)
    expansion = last_column_expansion(A, A.column(j))
    return CheckOutcome.from_certificates(zero_mod_ideal(expansion, rs, mode, evals, seed))
