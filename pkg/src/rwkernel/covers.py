"""Smallest modular covers whose classes induce subgraphs of bounded
rank-width.

Two vertices are d-equivalent when some module containing both induces a
subgraph of rank-width at most d; the equivalence classes form the unique
smallest such cover.  Deciding a pair reduces to one rank-width bound test
on the minimal module containing the pair, because rank-width never
increases under induced subgraphs.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import CapExceededError
from .graphs import Graph, VertexSet, VertexSetLike, bits, induced_subgraph, is_module, vertex_mask
from .rankwidth import DEFAULT_RW_CAP, rank_width_at_most


@dataclass(frozen=True)
class Cover:
    """Partition of V(G) into modules, each of rank-width at most d."""

    classes: tuple[VertexSet, ...]
    d: int

    @property
    def size(self) -> int:
        return len(self.classes)


def minimal_module(g: Graph, x: int, y: int) -> VertexSet:
    """The unique inclusion-minimal module containing two distinct vertices.

    Closure iteration: starting from {x, y}, repeatedly absorb any outside
    vertex adjacent to some but not all of the current set.
    """
    if x == y:
        raise ValueError("x and y must be distinct (use the singleton {x})")
    if not (0 <= x < g.n and 0 <= y < g.n):
        raise ValueError("vertex out of range")
    mask = (1 << x) | (1 << y)
    adj = g.adj
    full = g.full_mask
    changed = True
    while changed:
        changed = False
        for v in bits(full & ~mask):
            hit = adj[v] & mask
            if hit != 0 and hit != mask:
                mask |= 1 << v
                changed = True
    return VertexSet(g.n, mask)


class _ModuleWidthCache:
    """Caches rank-width bound tests keyed by module bitmask."""

    def __init__(self, g: Graph, d: int, cap: int):
        self.g = g
        self.d = d
        self.cap = cap
        self._known: dict[int, bool] = {}

    def at_most(self, mask: int) -> bool:
        got = self._known.get(mask)
        if got is None:
            sub, _ = induced_subgraph(self.g, mask)
            if sub.n > self.cap:
                raise CapExceededError(
                    f"module {sorted(bits(mask))} has {sub.n} vertices; the "
                    f"rank-width test is capped at {self.cap} (raise the cap "
                    f"to proceed)")
            got = rank_width_at_most(sub, self.d, self.cap)
            self._known[mask] = got
        return got


def equivalent_d(g: Graph, v: int, w: int, d: int, cap: int = DEFAULT_RW_CAP,
                 _cache: _ModuleWidthCache | None = None) -> bool:
    """Whether some module containing v and w induces rank-width <= d."""
    if not (0 <= v < g.n and 0 <= w < g.n):
        raise ValueError("vertex out of range")
    if v == w:
        return True
    cache = _cache if _cache is not None else _ModuleWidthCache(g, d, cap)
    return cache.at_most(minimal_module(g, v, w).mask)


def rankwidth_cover(g: Graph, d: int, cap: int = DEFAULT_RW_CAP) -> Cover:
    """Smallest cover by modules of rank-width at most d.

    Union-find over vertex pairs; pairs already merged transitively are
    skipped, and the width test is cached by module bitmask since the same
    minimal module recurs across pairs.
    """
    if d < 0:
        raise ValueError("d must be nonnegative")
    parent = list(range(g.n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    cache = _ModuleWidthCache(g, d, cap)
    for v in range(g.n):
        for w in range(v + 1, g.n):
            if find(v) == find(w):
                continue
            if equivalent_d(g, v, w, d, cap, _cache=cache):
                parent[find(w)] = find(v)

    groups: dict[int, int] = {}
    for v in range(g.n):
        root = find(v)
        groups[root] = groups.get(root, 0) | (1 << v)
    classes = sorted(groups.values(), key=lambda m: (m & -m).bit_length())
    return Cover(tuple(VertexSet(g.n, m) for m in classes), d)


def neighborhood_diversity(g: Graph) -> int:
    """Number of twin classes: v, w are twins iff N(v)\\{w} = N(w)\\{v}."""
    parent = list(range(g.n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for v in range(g.n):
        for w in range(v + 1, g.n):
            if g.adj[v] & ~(1 << w) == g.adj[w] & ~(1 << v):
                parent[find(w)] = find(v)
    return len({find(v) for v in range(g.n)})


def cover_violation(g: Graph, classes: list[VertexSet] | tuple[VertexSet, ...],
                    d: int, cap: int = DEFAULT_RW_CAP) -> str | None:
    """Diagnostic for why ``classes`` is not a rank-width-d cover, or None."""
    union = 0
    for c in classes:
        mask = vertex_mask(g, c)
        if mask == 0:
            return "a class is empty"
        if union & mask:
            return f"classes overlap at vertex {(union & mask & -(union & mask)).bit_length() - 1}"
        union |= mask
    if union != g.full_mask:
        missing = (g.full_mask & ~union)
        return f"vertex {(missing & -missing).bit_length() - 1} is uncovered"
    for c in classes:
        mask = vertex_mask(g, c)
        if not is_module(g, mask):
            return f"class {sorted(bits(mask))} is not a module"
        sub, _ = induced_subgraph(g, mask)
        if not rank_width_at_most(sub, d, cap):
            return f"class {sorted(bits(mask))} has rank-width > {d}"
    return None


def verify_cover(g: Graph, classes: list[VertexSet] | tuple[VertexSet, ...],
                 d: int, cap: int = DEFAULT_RW_CAP) -> bool:
    """True iff ``classes`` partitions V(G) into modules of rank-width <= d."""
    return cover_violation(g, classes, d, cap) is None
