"""Kernel construction for MSO model checking and MSO optimization.

Model-checking kernels replace every cover class by a constant-size
module of the same rank-q type (q = quantifier rank of the sentence) and
wire replacement modules completely whenever the original classes were
adjacent; the kernel then satisfies exactly the same rank-q sentences.

Optimization kernels additionally carry an annotation: replacement
modules are chosen at type level q+1, and for every subset W' of a
replacement module a triple (W', module \\ W', w) records the optimal
cardinality w of an original-module subset with the same rank-q type as
W'.  The annotated value of a kernel solution then reconstructs the
cardinality of an original solution.

Brute-force solvers over all subsets serve as the oracles that the
kernels are validated against.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator

from .covers import Cover, rankwidth_cover
from .errors import CapExceededError, GraphFormatError
from .games import DEFAULT_GAME_VERTEX_CAP, mso_type
from .graphs import Graph, VertexSet, bits, induced_subgraph, modules_adjacent
from .mso import Formula, check_masks, quantifier_rank
from .rankwidth import DEFAULT_RW_CAP, rank_width_at_most

DEFAULT_REP_CAP = 6
DEFAULT_OPT_MODULE_CAP = 15
DEFAULT_SOLVE_CAP = 16

LE = "<="
GE = ">="

_DIRECTIONS = {"<=": LE, "le": LE, ">=": GE, "ge": GE}


def normalize_direction(direction: str) -> str:
    try:
        return _DIRECTIONS[direction]
    except KeyError:
        raise ValueError(f"direction must be one of {sorted(_DIRECTIONS)}") from None


# -- small-graph enumeration and representatives ------------------------------

def enumerate_graphs(max_n: int) -> Iterator[Graph]:
    """All simple graphs with 1..max_n vertices, ordered by vertex count
    and then by ascending upper-triangle adjacency bitmask."""
    if max_n < 1:
        raise ValueError("max_n must be at least 1")
    for n in range(1, max_n + 1):
        pairs = list(combinations(range(n), 2))
        for mask in range(1 << len(pairs)):
            edges = (p for t, p in enumerate(pairs) if (mask >> t) & 1)
            yield Graph.from_edges(n, edges)


_REP_CACHE: dict = {}


def find_representative(h: Graph, q: int, d: int, cap: int = DEFAULT_REP_CAP,
                        rw_cap: int = DEFAULT_RW_CAP,
                        game_vertex_cap: int = DEFAULT_GAME_VERTEX_CAP) -> Graph:
    """First enumerated graph of rank-width <= d with the rank-q type of h.

    The caller guarantees rank_width(h) <= d, so whenever h itself has at
    most ``cap`` vertices the search terminates at or before h's own
    encoding.  If no representative fits the cap the failure is explicit;
    h is never silently returned.
    """
    target = mso_type(h, (), q, vertex_cap=game_vertex_cap, round_cap=q)
    cache_key = (target, d, cap, rw_cap)
    got = _REP_CACHE.get(cache_key)
    if got is not None:
        return got
    # sentence types at levels 0 and 1 never discriminate, so the filter
    # ladder starts at level 2; cheap levels reject most candidates before
    # the full-depth comparison
    levels = list(range(2, q)) if q > 2 else []
    targets = [(lv, mso_type(h, (), lv, vertex_cap=game_vertex_cap, round_cap=lv))
               for lv in levels] + [(q, target)]
    bound = min(cap, h.n) if h.n >= 1 else cap
    for cand in enumerate_graphs(bound):
        if not rank_width_at_most(cand, d, rw_cap):
            continue
        if all(mso_type(cand, (), lv, vertex_cap=cap, round_cap=lv) == t
               for lv, t in targets):
            _REP_CACHE[cache_key] = cand
            return cand
    raise CapExceededError(
        f"no rank-width-{d} graph with at most {cap} vertices has the "
        f"module's rank-{q} type; raise the representative cap")


# -- kernel assembly -----------------------------------------------------------

ModuleMap = tuple[tuple[tuple[str, ...], VertexSet], ...]


@dataclass(frozen=True)
class McKernel:
    """Model-checking kernel: the reduced graph plus the map from original
    cover classes (as label tuples) to their replacement modules."""

    graph: Graph
    module_map: ModuleMap


def _assemble(g: Graph, cover: Cover, reps: list[Graph]) -> tuple[Graph, ModuleMap]:
    offsets = []
    total = 0
    for rep in reps:
        offsets.append(total)
        total += rep.n
    rows = [0] * total
    labels = []
    for i, rep in enumerate(reps):
        off = offsets[i]
        for v in range(rep.n):
            rows[off + v] = rep.adj[v] << off
            labels.append(f"{i}:{v}")
    for i in range(len(reps)):
        for j in range(i + 1, len(reps)):
            if modules_adjacent(g, cover.classes[i], cover.classes[j]):
                mi = ((1 << reps[i].n) - 1) << offsets[i]
                mj = ((1 << reps[j].n) - 1) << offsets[j]
                for v in bits(mi):
                    rows[v] |= mj
                for v in bits(mj):
                    rows[v] |= mi
    kernel = Graph(total, tuple(rows), tuple(labels))
    module_map = tuple(
        (tuple(g.label_of(v) for v in cover.classes[i]),
         VertexSet(total, ((1 << reps[i].n) - 1) << offsets[i]))
        for i in range(len(reps)))
    return kernel, module_map


def kernelize_mc(g: Graph, phi: Formula, d: int,
                 rep_cap: int = DEFAULT_REP_CAP,
                 rw_cap: int = DEFAULT_RW_CAP,
                 game_vertex_cap: int = DEFAULT_GAME_VERTEX_CAP) -> McKernel:
    """Kernel preserving the verdict of the sentence phi.

    The kernel has at most (number of cover classes) * rep_cap vertices.
    """
    if not phi.is_sentence():
        raise ValueError("model-checking kernels require a sentence (no free variables)")
    q = quantifier_rank(phi)
    cover = rankwidth_cover(g, d, rw_cap)
    reps = []
    for c in cover.classes:
        sub, _ = induced_subgraph(g, c)
        reps.append(find_representative(sub, q, d, rep_cap, rw_cap, game_vertex_cap))
    kernel, module_map = _assemble(g, cover, reps)
    return McKernel(kernel, module_map)


# -- annotations ----------------------------------------------------------------

@dataclass(frozen=True)
class Annotation:
    """Weight triples (X, Y, w): a set Z collects w when X is inside Z and
    Y avoids Z; the value of Z is the sum over collecting triples."""

    triples: tuple[tuple[VertexSet, VertexSet, int], ...]

    def __post_init__(self):
        seen: dict[tuple[int, int], int] = {}
        for x, y, w in self.triples:
            if x.n != y.n:
                raise ValueError("triple sets live on different graphs")
            if x.mask & y.mask:
                raise ValueError("triple with overlapping X and Y")
            if w < 0:
                raise ValueError("weights must be nonnegative")
            key = (x.mask, y.mask)
            if seen.setdefault(key, w) != w:
                raise ValueError("conflicting weights for the same (X, Y) pair")


def annotation_value(annotation: Annotation, z: VertexSet | int) -> int:
    """Sum of weights over triples with X inside z and Y disjoint from z."""
    zm = z.mask if isinstance(z, VertexSet) else z
    total = 0
    for x, y, w in annotation.triples:
        if x.mask & ~zm == 0 and y.mask & zm == 0:
            total += w
    return total


def trivial_annotation(g: Graph) -> Annotation:
    """The annotation whose value of any Z is |Z|."""
    return Annotation(tuple(
        (VertexSet(g.n, 1 << v), VertexSet(g.n, 0), 1) for v in range(g.n)))


def encoding_bits(annotation: Annotation) -> int:
    """Encoded size of the annotation: |X| + |Y| + binary weight per triple."""
    return sum(len(x) + len(y) + max(1, w.bit_length())
               for x, y, w in annotation.triples)


@dataclass(frozen=True)
class AnnotatedInstance:
    """Annotated-optimization instance: kernel graph, annotation, threshold
    r with direction, and the original-class-to-kernel-module map."""

    graph: Graph
    annotation: Annotation
    r: int
    direction: str
    module_map: ModuleMap

    def __post_init__(self):
        if self.direction not in (LE, GE):
            raise ValueError("direction must be '<=' or '>='")
        union = 0
        for _, kernel_set in self.module_map:
            if kernel_set.n != self.graph.n:
                raise ValueError("kernel module does not match the kernel graph")
            if union & kernel_set.mask:
                raise ValueError("kernel modules overlap")
            union |= kernel_set.mask
        if union != self.graph.full_mask:
            raise ValueError("kernel modules do not cover the kernel graph")
        if len({orig for orig, _ in self.module_map}) != len(self.module_map):
            raise ValueError("module map is not a bijection")


def kernelize_opt(g: Graph, phi: Formula, direction: str, r: int, d: int,
                  rep_cap: int = DEFAULT_REP_CAP,
                  rw_cap: int = DEFAULT_RW_CAP,
                  game_vertex_cap: int = DEFAULT_GAME_VERTEX_CAP,
                  opt_module_cap: int = DEFAULT_OPT_MODULE_CAP) -> AnnotatedInstance:
    """Annotated kernel for optimizing |S| subject to phi(S).

    Replacement modules are matched at type level q+1 so that every subset
    of a replacement module has a type-q partner in its original class;
    the partner of optimal cardinality provides the triple weight.
    """
    if phi.arity != 1:
        raise ValueError("optimization kernels require exactly one free set variable")
    direction = normalize_direction(direction)
    q = quantifier_rank(phi)
    cover = rankwidth_cover(g, d, rw_cap)
    reps = []
    modules = []
    for c in cover.classes:
        sub, _ = induced_subgraph(g, c)
        if sub.n > opt_module_cap:
            raise CapExceededError(
                f"class {{{', '.join(g.label_of(v) for v in c)}}} has {sub.n} "
                f"vertices; the optimization subset search is capped at "
                f"{opt_module_cap} (raise the opt cap to proceed)")
        modules.append(sub)
        reps.append(find_representative(sub, q + 1, d, rep_cap, rw_cap, game_vertex_cap))
    kernel, module_map = _assemble(g, cover, reps)

    maximize = direction == GE
    triples = []
    for i, (sub, rep) in enumerate(zip(modules, reps)):
        best: dict[int, int] = {}
        order = sorted(range(1 << sub.n),
                       key=lambda m: (m.bit_count(), m), reverse=maximize)
        for w_mask in order:
            tid = mso_type(sub, (w_mask,), q, vertex_cap=opt_module_cap, round_cap=q)
            best.setdefault(tid, w_mask.bit_count())
        kernel_members = module_map[i][1].members()
        for w_mask in range(1 << rep.n):
            tid = mso_type(rep, (w_mask,), q, vertex_cap=opt_module_cap, round_cap=q)
            size = best.get(tid)
            if size is None:
                raise RuntimeError(
                    "replacement module has a subset type missing from its "
                    "class; representative level q+1 was violated")
            x = sum(1 << kernel_members[v] for v in bits(w_mask))
            y = module_map[i][1].mask & ~x
            triples.append((VertexSet(kernel.n, x), VertexSet(kernel.n, y), size))
    return AnnotatedInstance(kernel, Annotation(tuple(triples)), r, direction, module_map)


# -- brute-force oracles ---------------------------------------------------------

def solve_opt(g: Graph, phi: Formula, direction: str,
              cap: int = DEFAULT_SOLVE_CAP) -> int | None:
    """Optimal |S| over all S with phi(S), by brute force; None if no S."""
    if phi.arity != 1:
        raise ValueError("optimization requires exactly one free set variable")
    direction = normalize_direction(direction)
    if g.n > cap:
        raise CapExceededError(
            f"graph has {g.n} vertices; the brute-force solver is capped at "
            f"{cap} (raise the cap to proceed)")
    order = sorted(range(1 << g.n), key=lambda m: (m.bit_count(), m),
                   reverse=direction == GE)
    for z in order:
        if check_masks(g, phi, (z,)):
            return z.bit_count()
    return None


def solve_annotated(inst: AnnotatedInstance, phi: Formula,
                    cap: int = DEFAULT_SOLVE_CAP) -> int | None:
    """Optimal annotated value over all Z with phi(Z); None if no Z."""
    if phi.arity != 1:
        raise ValueError("optimization requires exactly one free set variable")
    g = inst.graph
    if g.n > cap:
        raise CapExceededError(
            f"kernel has {g.n} vertices; the brute-force solver is capped at "
            f"{cap} (raise the cap to proceed)")
    maximize = inst.direction == GE
    best = None
    for z in range(1 << g.n):
        if check_masks(g, phi, (z,)):
            val = annotation_value(inst.annotation, z)
            if best is None or (val > best if maximize else val < best):
                best = val
    return best


def satisfies_threshold(value: int | None, direction: str, r: int) -> bool:
    """Decision for an optimization verdict against the threshold r."""
    if value is None:
        return False
    return value <= r if normalize_direction(direction) == LE else value >= r


# -- kernel documents -------------------------------------------------------------

def _graph_lines(g: Graph) -> list[str]:
    lines = [f"p {g.n} {g.edge_count()}"]
    for v in range(g.n):
        lines.append(f"v {v + 1} {g.label_of(v)}")
    for u, v in g.edges():
        lines.append(f"e {u + 1} {v + 1}")
    return lines


def _module_lines(g: Graph, module_map: ModuleMap) -> list[str]:
    lines = []
    for i, (orig, kernel_set) in enumerate(module_map):
        kern = " ".join(g.label_of(v) for v in kernel_set)
        lines.append(f"m {i} {' '.join(orig)} | {kern}")
    return lines


def format_mc_kernel(k: McKernel) -> str:
    lines = ["c mc kernel"]
    lines += _graph_lines(k.graph)
    lines += _module_lines(k.graph, k.module_map)
    return "\n".join(lines) + "\n"


def format_annotated(inst: AnnotatedInstance) -> str:
    g = inst.graph
    lines = ["c annotated kernel"]
    lines += _graph_lines(g)
    lines += _module_lines(g, inst.module_map)
    for x, y, w in inst.annotation.triples:
        xs = " ".join(g.label_of(v) for v in x)
        ys = " ".join(g.label_of(v) for v in y)
        lines.append(f"a ({xs} | {ys} | {w})")
    lines.append(f"r {inst.r}")
    lines.append(f"dir {inst.direction}")
    return "\n".join(lines) + "\n"


def mc_kernel_json(k: McKernel) -> dict:
    return {
        "kind": "mc-kernel",
        "graph": _graph_json(k.graph),
        "modules": _modules_json(k.graph, k.module_map),
    }


def annotated_json(inst: AnnotatedInstance) -> dict:
    g = inst.graph
    return {
        "kind": "annotated-kernel",
        "graph": _graph_json(g),
        "modules": _modules_json(g, inst.module_map),
        "annotation": [
            {"x": [g.label_of(v) for v in x],
             "y": [g.label_of(v) for v in y],
             "w": w}
            for x, y, w in inst.annotation.triples],
        "r": inst.r,
        "dir": inst.direction,
    }


def _graph_json(g: Graph) -> dict:
    return {
        "n": g.n,
        "labels": [g.label_of(v) for v in range(g.n)],
        "edges": [[u + 1, v + 1] for u, v in g.edges()],
    }


def _modules_json(g: Graph, module_map: ModuleMap) -> list[dict]:
    return [
        {"original": list(orig), "kernel": [g.label_of(v) for v in ks]}
        for orig, ks in module_map]


def parse_annotated(text: str) -> AnnotatedInstance:
    """Parse an annotated kernel document (text or JSON form)."""
    if text.lstrip().startswith("{"):
        return _annotated_from_json(json.loads(text))
    n = None
    labels: dict[int, str] = {}
    edges: list[tuple[int, int]] = []
    modules: list[tuple[tuple[str, ...], tuple[str, ...]]] = []
    raw_triples: list[tuple[list[str], list[str], int]] = []
    r = None
    direction = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        tag = parts[0]
        if tag == "p":
            n = int(parts[1])
        elif tag == "v":
            labels[int(parts[1]) - 1] = parts[2]
        elif tag == "e":
            edges.append((int(parts[1]) - 1, int(parts[2]) - 1))
        elif tag == "m":
            rest = raw.split(None, 2)[2]
            orig, _, kern = rest.partition("|")
            modules.append((tuple(orig.split()), tuple(kern.split())))
        elif tag == "a":
            body = raw.split(None, 1)[1].strip()
            if not (body.startswith("(") and body.endswith(")")):
                raise GraphFormatError("annotation triple must be parenthesized", lineno)
            fields = body[1:-1].split("|")
            if len(fields) != 3:
                raise GraphFormatError("annotation triple needs 3 fields", lineno)
            raw_triples.append((fields[0].split(), fields[1].split(), int(fields[2])))
        elif tag == "r":
            r = int(parts[1])
        elif tag == "dir":
            direction = parts[1]
        else:
            raise GraphFormatError(f"unknown line tag {tag!r}", lineno)
    if n is None or r is None or direction is None:
        raise GraphFormatError("document is missing p, r, or dir lines")
    label_list = tuple(labels.get(i, str(i + 1)) for i in range(n))
    g = Graph.from_edges(n, edges, label_list)
    index = {lab: i for i, lab in enumerate(label_list)}
    module_map = tuple(
        (orig, VertexSet.of(g, (index[x] for x in kern))) for orig, kern in modules)
    triples = tuple(
        (VertexSet.of(g, (index[x] for x in xs)),
         VertexSet.of(g, (index[y] for y in ys)), w)
        for xs, ys, w in raw_triples)
    return AnnotatedInstance(g, Annotation(triples), r, normalize_direction(direction), module_map)


def _annotated_from_json(doc: dict) -> AnnotatedInstance:
    graph = doc["graph"]
    labels = tuple(graph["labels"])
    g = Graph.from_edges(graph["n"], ((u - 1, v - 1) for u, v in graph["edges"]), labels)
    index = {lab: i for i, lab in enumerate(labels)}
    module_map = tuple(
        (tuple(m["original"]), VertexSet.of(g, (index[x] for x in m["kernel"])))
        for m in doc["modules"])
    triples = tuple(
        (VertexSet.of(g, (index[x] for x in t["x"])),
         VertexSet.of(g, (index[y] for y in t["y"])), int(t["w"]))
        for t in doc["annotation"])
    return AnnotatedInstance(g, Annotation(triples), int(doc["r"]),
                             normalize_direction(doc["dir"]), module_map)
