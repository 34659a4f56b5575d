"""Undirected simple graphs as symmetric bit matrices, plus module tests
and the GF(2) cut-rank function.

Vertices are dense indices 0..n-1 internally; external names only appear
at the I/O boundary.  Graph and VertexSet are immutable, so they are safe
to share across threads and to use as cache keys.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .errors import GraphFormatError
from .gf2 import gf2_rank

log = logging.getLogger("rwkernel")


def bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of mask in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph; ``adj[i]`` is the neighbor bitmask of i.

    Equality and hashing are structural (vertex count and adjacency);
    labels are I/O decoration and do not participate.
    """

    n: int
    adj: tuple[int, ...]
    labels: tuple[str, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be nonnegative")
        if len(self.adj) != self.n:
            raise ValueError("adjacency row count does not match n")
        full = (1 << self.n) - 1
        for i, row in enumerate(self.adj):
            if row & ~full:
                raise ValueError(f"adjacency row {i} has bits beyond n")
            if (row >> i) & 1:
                raise ValueError(f"self-loop at vertex {i}")
        for i in range(self.n):
            for j in bits(self.adj[i]):
                if not (self.adj[j] >> i) & 1:
                    raise ValueError(f"adjacency not symmetric at ({i},{j})")
        if self.labels is not None:
            if len(self.labels) != self.n:
                raise ValueError("label count does not match n")
            if len(set(self.labels)) != self.n:
                raise ValueError("labels must be pairwise distinct")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]],
                   labels: tuple[str, ...] | None = None) -> "Graph":
        rows = [0] * n
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, tuple(rows), labels)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def edges(self) -> Iterator[tuple[int, int]]:
        for u in range(self.n):
            for v in bits(self.adj[u] >> (u + 1)):
                yield u, u + 1 + v

    def edge_count(self) -> int:
        return sum(row.bit_count() for row in self.adj) // 2

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self.adj[u] >> v) & 1)

    def label_of(self, v: int) -> str:
        if self.labels is not None:
            return self.labels[v]
        return str(v + 1)

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.edge_count()})"


@dataclass(frozen=True)
class VertexSet:
    """Subset of the vertices of a graph with n vertices, as a bitmask."""

    n: int
    mask: int

    def __post_init__(self):
        if not 0 <= self.mask < (1 << self.n):
            raise ValueError("mask has bits beyond the vertex count")

    @classmethod
    def of(cls, g: Graph, members: Iterable[int]) -> "VertexSet":
        mask = 0
        for v in members:
            if not 0 <= v < g.n:
                raise ValueError(f"vertex {v} out of range")
            mask |= 1 << v
        return cls(g.n, mask)

    @classmethod
    def full(cls, g: Graph) -> "VertexSet":
        return cls(g.n, g.full_mask)

    def members(self) -> tuple[int, ...]:
        return tuple(bits(self.mask))

    def __len__(self):
        return self.mask.bit_count()

    def __contains__(self, v: int) -> bool:
        return bool((self.mask >> v) & 1)

    def __iter__(self) -> Iterator[int]:
        return bits(self.mask)

    def __repr__(self):
        return f"VertexSet({{{', '.join(map(str, self))}}}, n={self.n})"


VertexSetLike = VertexSet | int | Iterable[int]


def vertex_mask(g: Graph, s: VertexSetLike) -> int:
    """Coerce a VertexSet, bitmask, or iterable of indices to a bitmask."""
    if isinstance(s, VertexSet):
        if s.n != g.n:
            raise ValueError("VertexSet belongs to a graph of different size")
        return s.mask
    if isinstance(s, int):
        if not 0 <= s <= g.full_mask:
            raise ValueError("mask has bits beyond the vertex count")
        return s
    return VertexSet.of(g, s).mask


# -- edge-list I/O ----------------------------------------------------------
#
# Format: optional header line `p <n> <m>`; edge lines `e <u> <v>` with
# 1-based labels, or bare `<u> <v>` token pairs; `c` starts a comment.


def parse_graph(text: str) -> Graph:
    """Parse an edge-list document.

    Vertex order follows first appearance of labels; with a `p` header the
    labels are "1".."n" in numeric order.  Self-loops are rejected,
    duplicate edges are idempotent (logged as a warning).
    """
    index: dict[str, int] = {}
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    declared: int | None = None

    def vertex(tok: str, lineno: int) -> int:
        if tok in index:
            return index[tok]
        if declared is not None:
            raise GraphFormatError(f"vertex '{tok}' not declared by header", lineno)
        index[tok] = len(index)
        return index[tok]

    for lineno, raw in enumerate(text.splitlines(), start=1):
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        if parts[0] == "p":
            if declared is not None:
                raise GraphFormatError("duplicate header line", lineno)
            if index:
                raise GraphFormatError("header must precede edge lines", lineno)
            if len(parts) != 3:
                raise GraphFormatError("header must be 'p <n> <m>'", lineno)
            try:
                declared = int(parts[1])
                int(parts[2])
            except ValueError:
                raise GraphFormatError("header counts must be integers", lineno) from None
            if declared < 0:
                raise GraphFormatError("vertex count must be nonnegative", lineno)
            for i in range(declared):
                index[str(i + 1)] = i
            continue
        if parts[0] == "e":
            parts = parts[1:]
        if len(parts) != 2:
            raise GraphFormatError("expected an edge as two tokens", lineno)
        u, v = vertex(parts[0], lineno), vertex(parts[1], lineno)
        if u == v:
            raise GraphFormatError(f"self-loop at '{parts[0]}'", lineno)
        key = (min(u, v), max(u, v))
        if key in seen:
            log.warning("line %d: duplicate edge %s %s ignored", lineno, parts[0], parts[1])
            continue
        seen.add(key)
        edges.append(key)

    n = declared if declared is not None else len(index)
    labels = [""] * n
    for tok, i in index.items():
        labels[i] = tok
    return Graph.from_edges(n, edges, tuple(labels))


def format_graph(g: Graph) -> str:
    """Emit the edge-list document for ``g`` (deterministic bytes)."""
    lines = [f"p {g.n} {g.edge_count()}"]
    if g.labels is not None and list(g.labels) != [str(i + 1) for i in range(g.n)]:
        lines.append("c labels " + " ".join(g.labels))
    for u, v in g.edges():
        lines.append(f"e {u + 1} {v + 1}")
    return "\n".join(lines) + "\n"


# -- structural operations --------------------------------------------------


def induced_subgraph(g: Graph, s: VertexSetLike) -> tuple[Graph, tuple[int, ...]]:
    """Induced subgraph on a nonempty vertex set.

    Returns the subgraph and the index map: position i of the map holds
    the original index of the subgraph's vertex i.
    """
    mask = vertex_mask(g, s)
    if mask == 0:
        raise ValueError("induced subgraph of the empty set")
    order = tuple(bits(mask))
    pos = {v: i for i, v in enumerate(order)}
    rows = []
    for v in order:
        row = 0
        for w in bits(g.adj[v] & mask):
            row |= 1 << pos[w]
        rows.append(row)
    labels = tuple(g.label_of(v) for v in order) if g.labels is not None else None
    return Graph(len(order), tuple(rows), labels), order


def cut_rank(g: Graph, u: VertexSetLike) -> int:
    """GF(2) rank of the adjacency submatrix between U and its complement.

    0 when U or its complement is empty (the matrix has no rows/columns).
    """
    mask = vertex_mask(g, u)
    comp = g.full_mask & ~mask
    return gf2_rank(g.adj[v] & comp for v in bits(mask))


def is_module(g: Graph, s: VertexSetLike) -> bool:
    """True iff every vertex outside S sees all of S or none of S."""
    mask = vertex_mask(g, s)
    if mask == 0:
        raise ValueError("the empty set is not a module")
    for v in bits(g.full_mask & ~mask):
        hit = g.adj[v] & mask
        if hit != 0 and hit != mask:
            return False
    return True


def modules_adjacent(g: Graph, a: VertexSetLike, b: VertexSetLike) -> bool:
    """Whether two disjoint modules are adjacent (some pair of endpoints).

    For disjoint modules adjacency is all-or-nothing, so one pair decides;
    in debug mode the remaining pairs are asserted to agree.
    """
    am, bm = vertex_mask(g, a), vertex_mask(g, b)
    if am & bm:
        raise ValueError("modules overlap")
    if am == 0 or bm == 0:
        raise ValueError("modules must be nonempty")
    if not is_module(g, am) or not is_module(g, bm):
        raise ValueError("inputs are not both modules")
    a0 = (am & -am).bit_length() - 1
    adjacent = bool(g.adj[a0] & bm)
    assert all(bool(g.adj[v] & bm) == adjacent and (g.adj[v] & bm in (0, bm))
               for v in bits(am)), "module adjacency is not all-or-nothing"
    return adjacent
