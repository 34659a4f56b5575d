"""Rank-q type equality via the q-round point/set game.

Two interpretations satisfy the same quantifier-rank-q formulas exactly
when the duplicator wins the q-round game on them (point moves pick a
vertex, set moves pick a vertex subset; the duplicator must keep the
final tuples a partial isomorphism).

``types_equal`` decides this by computing, per side, a canonical
back-and-forth value: at zero rounds the atomic pattern of the tuples,
and otherwise the pattern together with the value sets of all one-move
extensions.  Equality of these values is exactly a duplicator win, and
computing them per side avoids the blow-up of searching paired positions.
``duplicator_wins`` is the direct minimax search over game positions; it
is the reference implementation the fast path is validated against.

Set moves branch over all 2^n subsets, so both entry points enforce
explicit size caps instead of attempting infeasible searches.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

from .errors import CapExceededError
from .graphs import Graph, VertexSetLike, bits, vertex_mask

DEFAULT_GAME_VERTEX_CAP = 8
DEFAULT_GAME_ROUND_CAP = 3

Side = tuple[Graph, tuple[VertexSetLike, ...], tuple[int, ...]]


def partial_isomorphism(left: Side, right: Side) -> bool:
    """Whether the vertex tuples define a partial isomorphism.

    Checks that the equality and adjacency patterns of the two vertex
    tuples match, and that each vertex agrees with its partner on
    membership in every paired set.
    """
    gl, sets_l, verts_l = left
    gr, sets_r, verts_r = right
    if len(sets_l) != len(sets_r) or len(verts_l) != len(verts_r):
        raise ValueError("tuple lengths differ between the two sides")
    ml = [vertex_mask(gl, s) for s in sets_l]
    mr = [vertex_mask(gr, s) for s in sets_r]
    for i in range(len(verts_l)):
        vi, ui = verts_l[i], verts_r[i]
        for j in range(i):
            vj, uj = verts_l[j], verts_r[j]
            if (vi == vj) != (ui == uj):
                return False
            if gl.has_edge(vi, vj) != gr.has_edge(ui, uj):
                return False
        for sl, sr in zip(ml, mr):
            if (sl >> vi) & 1 != (sr >> ui) & 1:
                return False
    return True


# -- canonical rank-q type values ---------------------------------------------

_INTERN: dict = {}
_INTERN_LOCK = threading.Lock()
_TOP_CACHE: dict = {}
_CANON_CACHE: dict = {}


def _intern(value) -> int:
    got = _INTERN.get(value)
    if got is None:
        with _INTERN_LOCK:
            got = _INTERN.setdefault(value, len(_INTERN))
    return got


def _atomic_sig(adj: tuple[int, ...], sets: tuple[int, ...], verts: tuple[int, ...]) -> int:
    sig = 1
    for i, v in enumerate(verts):
        av = adj[v]
        for j in range(i):
            w = verts[j]
            sig = (sig << 2) | ((v == w) << 1) | ((av >> w) & 1)
        for s in sets:
            sig = (sig << 1) | ((s >> v) & 1)
    return sig


def _type_value(adj: tuple[int, ...], n: int, sets: tuple[int, ...],
                verts: tuple[int, ...], q: int) -> int:
    sig = _atomic_sig(adj, sets, verts)
    if q == 0:
        return _intern(("a", sig))
    pts = frozenset(
        _type_value(adj, n, sets, verts + (v,), q - 1) for v in range(n))
    sts = frozenset(
        _type_value(adj, n, sets + (s,), verts, q - 1) for s in range(1 << n))
    return _intern(("t", sig, pts, sts))


def _refine_colors(g: Graph) -> list[int]:
    # 1-WL color refinement; final ids are label-independent because each
    # round renumbers signatures in sorted order
    colors = [g.adj[v].bit_count() for v in range(g.n)]
    while True:
        sigs = [(colors[v], tuple(sorted(colors[w] for w in bits(g.adj[v]))))
                for v in range(g.n)]
        renumber = {s: i for i, s in enumerate(sorted(set(sigs)))}
        new = [renumber[s] for s in sigs]
        if new == colors:
            return colors
        colors = new


_CANON_PERM_LIMIT = 100_000


def _canonical_key(g: Graph):
    """Isomorphism-invariant key for small graphs (exact form otherwise).

    Minimum upper-triangle edge bitmask over all permutations consistent
    with the stable 1-WL coloring; falls back to the exact adjacency when
    the color classes leave too many permutations.
    """
    got = _CANON_CACHE.get(g.adj)
    if got is not None:
        return got
    from itertools import combinations, permutations, product
    from math import factorial
    colors = _refine_colors(g)
    cells: dict[int, list[int]] = {}
    for v in range(g.n):
        cells.setdefault(colors[v], []).append(v)
    ordered = [cells[c] for c in sorted(cells)]
    count = 1
    for cell in ordered:
        count *= factorial(len(cell))
    if count > _CANON_PERM_LIMIT:
        key = ("x", g.adj)
        _CANON_CACHE[g.adj] = key
        return key
    starts = []
    at = 0
    for cell in ordered:
        starts.append(at)
        at += len(cell)
    pair_bit = {p: t for t, p in enumerate(combinations(range(g.n), 2))}
    edges = list(g.edges())
    best = None
    for cell_perms in product(*(permutations(cell) for cell in ordered)):
        perm = [0] * g.n
        for start, cell in zip(starts, cell_perms):
            for off, v in enumerate(cell):
                perm[v] = start + off
        mask = 0
        for u, v in edges:
            a, b = perm[u], perm[v]
            mask |= 1 << pair_bit[(a, b) if a < b else (b, a)]
        if best is None or mask < best:
            best = mask
    key = ("c", g.n, best)
    _CANON_CACHE[g.adj] = key
    return key


def mso_type(g: Graph, sets: tuple[VertexSetLike, ...], q: int,
             vertex_cap: int = DEFAULT_GAME_VERTEX_CAP,
             round_cap: int = DEFAULT_GAME_ROUND_CAP) -> int:
    """Opaque id of the rank-q type of (g, sets).

    Two interpretations have equal ids exactly when ``types_equal`` holds;
    ids are stable within a process, which makes them usable as cache keys.
    Sentence types (empty set tuple) are isomorphism-invariant and are
    cached under a canonical form of the graph.
    """
    if q < 0:
        raise ValueError("q must be nonnegative")
    if g.n > vertex_cap:
        raise CapExceededError(
            f"graph has {g.n} vertices; the game search is capped at "
            f"{vertex_cap} vertices (raise the game cap to proceed)")
    if q > round_cap:
        raise CapExceededError(
            f"{q} rounds requested; the game search is capped at "
            f"{round_cap} rounds (raise the game cap to proceed)")
    masks = tuple(vertex_mask(g, s) for s in sets)
    key = (_canonical_key(g), q) if not masks else (g.adj, masks, q)
    got = _TOP_CACHE.get(key)
    if got is None:
        got = _type_value(g.adj, g.n, masks, (), q)
        _TOP_CACHE[key] = got
    return got


def types_equal(left: tuple[Graph, tuple[VertexSetLike, ...]],
                right: tuple[Graph, tuple[VertexSetLike, ...]], q: int,
                vertex_cap: int = DEFAULT_GAME_VERTEX_CAP,
                round_cap: int = DEFAULT_GAME_ROUND_CAP) -> bool:
    """Whether both sides satisfy the same rank-q formulas."""
    gl, sets_l = left
    gr, sets_r = right
    if len(sets_l) != len(sets_r):
        raise ValueError("the two sides carry different numbers of sets")
    return (mso_type(gl, sets_l, q, vertex_cap, round_cap)
            == mso_type(gr, sets_r, q, vertex_cap, round_cap))


def clear_type_caches() -> None:
    """Drop the process-wide type tables (frees memory between workloads)."""
    with _INTERN_LOCK:
        _INTERN.clear()
        _TOP_CACHE.clear()
        _CANON_CACHE.clear()


# -- direct game search (reference implementation) ----------------------------

@dataclass(frozen=True)
class GamePosition:
    """A mid-game state: both sides' tuples and the rounds still to play."""

    left: Side
    right: Side
    rounds_left: int

    def __post_init__(self):
        _, sets_l, verts_l = self.left
        _, sets_r, verts_r = self.right
        if len(sets_l) != len(sets_r) or len(verts_l) != len(verts_r):
            raise ValueError("tuple lengths differ between the two sides")
        if self.rounds_left < 0:
            raise ValueError("rounds_left must be nonnegative")


def _canon_side(g: Graph, sets: tuple[int, ...], verts: tuple[int, ...]):
    # relabel vertices by first use in (sets, verts); collapses positions
    # that only differ by a renaming of touched vertices
    order = []
    seen = set()
    for s in sets:
        for v in bits(s):
            if v not in seen:
                seen.add(v)
                order.append(v)
    for v in verts:
        if v not in seen:
            seen.add(v)
            order.append(v)
    for v in range(g.n):
        if v not in seen:
            order.append(v)
    pos = {v: i for i, v in enumerate(order)}
    rows = [0] * g.n
    for v in range(g.n):
        row = 0
        for w in bits(g.adj[v]):
            row |= 1 << pos[w]
        rows[pos[v]] = row
    csets = tuple(sum(1 << pos[v] for v in bits(s)) for s in sets)
    cverts = tuple(pos[v] for v in verts)
    return (g.n, tuple(rows), csets, cverts)


def duplicator_wins(position: GamePosition,
                    vertex_cap: int = DEFAULT_GAME_VERTEX_CAP,
                    round_cap: int = DEFAULT_GAME_ROUND_CAP) -> bool:
    """Minimax search of the game tree; for every spoiler move there must
    be a duplicator response that keeps winning with one round fewer."""
    gl, sets_l, verts_l = position.left
    gr, sets_r, verts_r = position.right
    if max(gl.n, gr.n) > vertex_cap:
        raise CapExceededError(
            f"graphs have {gl.n} and {gr.n} vertices; the game search is "
            f"capped at {vertex_cap} vertices (raise the game cap to proceed)")
    if position.rounds_left > round_cap:
        raise CapExceededError(
            f"{position.rounds_left} rounds requested; the game search is "
            f"capped at {round_cap} rounds (raise the game cap to proceed)")
    sl = tuple(vertex_mask(gl, s) for s in sets_l)
    sr = tuple(vertex_mask(gr, s) for s in sets_r)
    memo: dict = {}

    def wins(sl, vl, sr, vr, rounds: int) -> bool:
        if rounds == 0:
            return partial_isomorphism((gl, sl, vl), (gr, sr, vr))
        key = (_canon_side(gl, sl, vl), _canon_side(gr, sr, vr), rounds)
        got = memo.get(key)
        if got is not None:
            return got
        ok = True
        for v in range(gl.n):  # spoiler point move on the left
            if not any(wins(sl, vl + (v,), sr, vr + (u,), rounds - 1) for u in range(gr.n)):
                ok = False
                break
        if ok:
            for u in range(gr.n):  # spoiler point move on the right
                if not any(wins(sl, vl + (v,), sr, vr + (u,), rounds - 1) for v in range(gl.n)):
                    ok = False
                    break
        if ok:
            for s in range(1 << gl.n):  # spoiler set move on the left
                if not any(wins(sl + (s,), vl, sr + (t,), vr, rounds - 1) for t in range(1 << gr.n)):
                    ok = False
                    break
        if ok:
            for t in range(1 << gr.n):  # spoiler set move on the right
                if not any(wins(sl + (s,), vl, sr + (t,), vr, rounds - 1) for s in range(1 << gl.n)):
                    ok = False
                    break
        memo[key] = ok
        return ok

    return wins(sl, verts_l, sr, verts_r, position.rounds_left)
