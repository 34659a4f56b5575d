"""Exact rank-width by dynamic programming over vertex subsets.

The width of a subset S is computed by the recurrence

    rec(S) = rho(S)                                 for |S| = 1
    rec(S) = max(rho(S), min over proper bipartitions {S1, S2} of S
                          of max(rec(S1), rec(S2)))  for |S| >= 2

where rho is the cut-rank function of the whole graph.  rec(V) is the
rank-width for n >= 2 since rho(V) = 0; for n <= 1 the width is 0.
The memo table is keyed by subset bitmask, giving O(3^n) subset-split
pairs, so graphs are capped (default 16 vertices) and the cap failure
is an explicit error, never a silent truncation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .errors import CapExceededError
from .gf2 import gf2_rank
from .graphs import Graph, VertexSet, bits

DEFAULT_RW_CAP = 16


@dataclass(frozen=True)
class SplitTree:
    """Rooted binary split tree; leaves are singleton vertex sets."""

    members: int
    left: "SplitTree | None" = None
    right: "SplitTree | None" = None

    def is_leaf(self) -> bool:
        return self.left is None

    def nodes(self):
        yield self
        if self.left is not None:
            yield from self.left.nodes()
            yield from self.right.nodes()


@dataclass(frozen=True)
class RankWidthResult:
    width: int
    witness: SplitTree | None

    def witness_sets(self, g: Graph) -> list[VertexSet]:
        if self.witness is None:
            return []
        return [VertexSet(g.n, t.members) for t in self.witness.nodes()]


def _cut_rank_memo(g: Graph) -> Callable[[int], int]:
    adj = g.adj
    full = g.full_mask
    memo: dict[int, int] = {}

    def rho(mask: int) -> int:
        r = memo.get(mask)
        if r is None:
            comp = full & ~mask
            r = gf2_rank(adj[v] & comp for v in bits(mask))
            memo[mask] = r
        return r

    return rho


def _check_cap(g: Graph, cap: int) -> None:
    if g.n > cap:
        raise CapExceededError(
            f"graph has {g.n} vertices; rank-width computation is capped at "
            f"{cap} (raise the cap to proceed)")


def rank_width(g: Graph, cap: int = DEFAULT_RW_CAP) -> RankWidthResult:
    """Exact rank-width with a witness decomposition.

    Ties among optimal splits are broken toward the numerically smallest
    split bitmask so that witnesses are deterministic.
    """
    _check_cap(g, cap)
    n = g.n
    if n == 0:
        return RankWidthResult(0, None)
    if n == 1:
        return RankWidthResult(0, SplitTree(1))
    rho = _cut_rank_memo(g)
    rec: dict[int, int] = {}
    split: dict[int, int] = {}

    def solve(mask: int) -> int:
        got = rec.get(mask)
        if got is not None:
            return got
        if mask & (mask - 1) == 0:
            rec[mask] = rho(mask)
            return rec[mask]
        low = mask & -mask
        best = None
        best_key = None
        # iterate submasks containing the lowest bit: each unordered
        # bipartition of mask appears exactly once
        s1 = mask
        while True:
            s1 = (s1 - 1) & mask
            if s1 == 0:
                break
            if not s1 & low:
                continue
            s2 = mask ^ s1
            val = max(solve(s1), solve(s2))
            key = min(s1, s2)
            if best is None or val < best or (val == best and key < best_key):
                best, best_key = val, key
        split[mask] = best_key
        rec[mask] = max(rho(mask), best)
        return rec[mask]

    width = solve(g.full_mask)

    def build(mask: int) -> SplitTree:
        if mask & (mask - 1) == 0:
            return SplitTree(mask)
        s1 = split[mask]
        s2 = mask ^ s1
        a, b = min(s1, s2), max(s1, s2)
        return SplitTree(mask, build(a), build(b))

    return RankWidthResult(width, build(g.full_mask))


def rank_width_at_most(g: Graph, d: int, cap: int = DEFAULT_RW_CAP) -> bool:
    """Decide rank_width(g) <= d with branch-and-bound pruning.

    Any subset whose cut-rank already exceeds d is abandoned before its
    splits are explored.
    """
    if d < 0:
        raise ValueError("rank-width bound must be nonnegative")
    _check_cap(g, cap)
    if g.n <= 1:
        return True
    rho = _cut_rank_memo(g)
    feasible: dict[int, bool] = {}

    def ok(mask: int) -> bool:
        got = feasible.get(mask)
        if got is not None:
            return got
        if rho(mask) > d:
            feasible[mask] = False
            return False
        if mask & (mask - 1) == 0:
            feasible[mask] = True
            return True
        low = mask & -mask
        s1 = mask
        while True:
            s1 = (s1 - 1) & mask
            if s1 == 0:
                break
            if not s1 & low:
                continue
            if ok(s1) and ok(mask ^ s1):
                feasible[mask] = True
                return True
        feasible[mask] = False
        return False

    return ok(g.full_mask)


def witness_width(g: Graph, tree: SplitTree) -> int:
    """Recompute the max cut-rank over all subtree vertex sets."""
    rho = _cut_rank_memo(g)
    return max(rho(t.members) for t in tree.nodes())
