"""
Sparse Row Echelon Kernel
=========================

Incremental Gaussian elimination over any exact field whose elements support
``+ - * /`` and truthiness (``fractions.Fraction`` at an evaluation point, or
``RatFunc`` for exact Q(q) work). Rows are sparse dicts from column index to
value; a row's pivot is its smallest column index, so the static column order
chosen by the caller is the pivot order.

Usage:
    basis = EchelonBasis()
    basis.insert({0: Fraction(1), 3: Fraction(-2)})
    basis.contains({0: Fraction(2), 3: Fraction(-4)})   # True
"""

import heapq
from typing import Dict, Hashable, Iterable, Mapping, TypeVar

Value = TypeVar("Value")
SparseRow = Dict[int, Value]


class EchelonBasis:
    """Row-echelon basis of a growing span; each stored row owns one pivot column."""

    def __init__(self):
        self._pivots: Dict[int, SparseRow] = {}
        self.rows_seen = 0

    @property
    def rank(self) -> int:
        return len(self._pivots)

    def reduce(self, row: Mapping[int, Value]) -> SparseRow:
        """Return the remainder of ``row`` after eliminating every pivot column."""
        residual: SparseRow = dict(row)
        queue = [c for c in residual if c in self._pivots]
        heapq.heapify(queue)
        while queue:
            col = heapq.heappop(queue)
            value = residual.get(col)
            if value is None:
                continue
            pivot_row = self._pivots[col]
            factor = value / pivot_row[col]
            for c, v in pivot_row.items():
                if c == col:
                    continue
                current = residual.get(c)
                delta = factor * v
                updated = -delta if current is None else current - delta
                if updated:
                    residual[c] = updated
                    if current is None and c in self._pivots:
                        heapq.heappush(queue, c)
                elif current is not None:
                    del residual[c]
            del residual[col]
        return residual

    def insert(self, row: Mapping[int, Value]) -> bool:
        """Add ``row`` to the span; returns False when it was already dependent."""
        self.rows_seen += 1
        residual = self.reduce(row)
        if not residual:
            return False
        self._pivots[min(residual)] = residual
        return True

    def contains(self, row: Mapping[int, Value]) -> bool:
        return not self.reduce(row)


def least_fill_order(rows: Iterable[Mapping[Hashable, object]], extra: Iterable[Hashable] = ()) -> Dict[Hashable, int]:
    """
    Assign column indices so that columns touched by fewer rows pivot first.

    Ties are broken by the natural ordering of the column keys, which keeps
    the elimination deterministic.
    """
    fill: Dict[Hashable, int] = {}
    for row in rows:
        for key in row:
            fill[key] = fill.get(key, 0) + 1
    for key in extra:
        fill.setdefault(key, 0)
    ordered = sorted(fill, key=lambda key: (fill[key], key))
    return {key: index for index, key in enumerate(ordered)}
