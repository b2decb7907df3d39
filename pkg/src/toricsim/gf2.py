"""GF(2) linear algebra on int bitsets.

Rows are python ints used as bit vectors (bit q = column q), which gives
word-parallel XOR/AND and arbitrary width for free.
"""

from __future__ import annotations

from typing import List, Optional


class Echelon:
    """Incremental row-echelon basis with combination tracking.

    Each inserted row is reduced against the current basis; if a nonzero
    residual remains it becomes a new pivot row.  For every basis row we
    keep the combination of *inserted* rows that produced it, so
    ``solve`` can report solutions in terms of the original row indices.
    """

    def __init__(self) -> None:
        self.pivots: List[int] = []  # pivot bit position per basis row
        self.rows: List[int] = []
        self.combos: List[int] = []  # bitmask over inserted-row indices
        self.n_inserted = 0

    def _reduce(self, vec: int, combo: int) -> tuple[int, int]:
        for i, row in enumerate(self.rows):
            if (vec >> self.pivots[i]) & 1:
                vec ^= row
                combo ^= self.combos[i]
        return vec, combo

    def add(self, vec: int) -> bool:
        """Insert a row. Returns True if it increased the rank."""
        idx = self.n_inserted
        self.n_inserted += 1
        vec, combo = self._reduce(vec, 1 << idx)
        if vec == 0:
            return False
        pivot = vec.bit_length() - 1
        # keep basis fully reduced
        for i, row in enumerate(self.rows):
            if (row >> pivot) & 1:
                self.rows[i] ^= vec
                self.combos[i] ^= combo
        self.rows.append(vec)
        self.pivots.append(pivot)
        self.combos.append(combo)
        return True

    @property
    def rank(self) -> int:
        return len(self.rows)

    def contains(self, vec: int) -> bool:
        residual, _ = self._reduce(vec, 0)
        return residual == 0

    def solve(self, vec: int) -> Optional[List[int]]:
        """Express vec as XOR of inserted rows; None if outside the span.

        Returns sorted indices of inserted rows (one valid combination).
        """
        residual, combo = self._reduce(vec, 0)
        if residual != 0:
            return None
        return [i for i in range(self.n_inserted) if (combo >> i) & 1]


def rank(rows: List[int]) -> int:
    ech = Echelon()
    for r in rows:
        ech.add(r)
    return ech.rank


def in_span(vec: int, rows: List[int]) -> bool:
    ech = Echelon()
    for r in rows:
        ech.add(r)
    return ech.contains(vec)


def solve(rows: List[int], vec: int) -> Optional[List[int]]:
    """Solve sum_{i in S} rows[i] = vec over GF(2); returns S or None."""
    ech = Echelon()
    for r in rows:
        ech.add(r)
    return ech.solve(vec)


def nullspace(rows: List[int], n_cols: int) -> List[int]:
    """Basis of {v : parity(v & row) = 0 for all rows}.

    Treats rows as parity checks on n_cols-bit vectors.
    """
    # Gaussian elimination on the check matrix, tracking pivot columns.
    work = [r for r in rows if r != 0]
    pivots: List[int] = []
    reduced: List[int] = []
    for r in work:
        for p, row in zip(pivots, reduced):
            if (r >> p) & 1:
                r ^= row
        if r == 0:
            continue
        p = r.bit_length() - 1
        for i, row in enumerate(reduced):
            if (row >> p) & 1:
                reduced[i] ^= r
        pivots.append(p)
        reduced.append(r)
    pivot_set = set(pivots)
    basis: List[int] = []
    for free in range(n_cols):
        if free in pivot_set:
            continue
        v = 1 << free
        for p, row in zip(pivots, reduced):
            if (row >> free) & 1:
                v |= 1 << p
        basis.append(v)
    return basis


def parity(x: int) -> int:
    return x.bit_count() & 1
