"""GF(2) linear algebra on int bitsets."""

from __future__ import annotations

from typing import Iterable


def gf2_rank(rows: Iterable[int]) -> int:
    """Rank over GF(2) of a matrix given as int row bit-vectors.

    Zero columns do not affect the rank, so rows may use any consistent
    column indexing; columns absent from every row simply count as zero.
    """
    pivots: dict[int, int] = {}
    rank = 0
    for row in rows:
        while row:
            low = row & -row
            other = pivots.get(low)
            if other is None:
                pivots[low] = row
                rank += 1
                break
            row ^= other
    return rank
