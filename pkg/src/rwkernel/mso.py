"""Monadic second-order formulas on graphs: AST, parser, and a brute-force
model checker.

The core connectives are negation, conjunction, and existential
quantification over vertices and vertex sets; disjunction, implication,
and universal quantifiers are desugared at parse time.  Vertex variables
are lowercase identifiers, set variables uppercase; ``E`` is reserved for
the adjacency atom.

Formula files may declare free set variables with leading ``free X [Y ...]``
header lines.  Only set variables may be free; a vertex variable that is
never bound is a parse error.

Concrete grammar (ASCII):

    formula := ("exists" | "forall") (VAR | SETVAR) "." formula | disj
    disj    := conj {"|" conj}
    conj    := lit {"&" lit}
    lit     := "!" lit | "(" formula ("->" formula)? ")" | atom
    atom    := "E(" VAR "," VAR ")" | VAR "=" VAR | SETVAR "(" VAR ")"
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Union

from .errors import FormulaSyntaxError
from .graphs import Graph, VertexSet


# -- abstract syntax ---------------------------------------------------------

@dataclass(frozen=True)
class Edge:
    x: str
    y: str


@dataclass(frozen=True)
class Eq:
    x: str
    y: str


@dataclass(frozen=True)
class In:
    set_var: str
    x: str


@dataclass(frozen=True)
class Not:
    sub: "Node"


@dataclass(frozen=True)
class And:
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class ExistsVertex:
    var: str
    sub: "Node"


@dataclass(frozen=True)
class ExistsSet:
    var: str
    sub: "Node"


Node = Union[Edge, Eq, In, Not, And, ExistsVertex, ExistsSet]


@dataclass(frozen=True)
class Formula:
    """Well-scoped formula; ``free_set_vars`` fixes the argument order."""

    root: Node
    free_set_vars: tuple[str, ...] = ()

    @property
    def arity(self) -> int:
        return len(self.free_set_vars)

    def is_sentence(self) -> bool:
        return not self.free_set_vars


def quantifier_rank(phi: Formula | Node) -> int:
    """Maximum quantifier nesting depth, counting vertex and set quantifiers."""
    node = phi.root if isinstance(phi, Formula) else phi
    if isinstance(node, (Edge, Eq, In)):
        return 0
    if isinstance(node, Not):
        return quantifier_rank(node.sub)
    if isinstance(node, And):
        return max(quantifier_rank(node.left), quantifier_rank(node.right))
    return 1 + quantifier_rank(node.sub)


# -- derived connectives -----------------------------------------------------

def make_or(a: Node, b: Node) -> Node:
    return Not(And(Not(a), Not(b)))


def make_implies(a: Node, b: Node) -> Node:
    return Not(And(a, Not(b)))


def make_forall_vertex(var: str, sub: Node) -> Node:
    return Not(ExistsVertex(var, Not(sub)))


def make_forall_set(var: str, sub: Node) -> Node:
    return Not(ExistsSet(var, Not(sub)))


# -- parser ------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(->|[A-Za-z][A-Za-z0-9_]*|[().,=!&|])")


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            rest = text[pos:].lstrip()
            if not rest:
                break
            at = len(text) - len(rest)
            raise FormulaSyntaxError(f"unexpected character {rest[0]!r}", at)
        tokens.append((m.group(1), m.start(1)))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, tokens: list[tuple[str, int]], free_sets: tuple[str, ...]):
        self.tokens = tokens
        self.i = 0
        self.free_sets = free_sets
        self.bound_vertex: list[str] = []
        self.bound_set: list[str] = []

    def peek(self) -> str | None:
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def pos(self) -> int:
        return self.tokens[self.i][1] if self.i < len(self.tokens) else -1

    def take(self) -> str:
        tok = self.peek()
        if tok is None:
            raise FormulaSyntaxError("unexpected end of formula")
        self.i += 1
        return tok

    def expect(self, tok: str) -> None:
        got = self.peek()
        if got != tok:
            raise FormulaSyntaxError(f"expected {tok!r}, got {got!r}", self.pos())
        self.i += 1

    def formula(self) -> Node:
        tok = self.peek()
        if tok in ("exists", "forall"):
            self.take()
            at = self.pos()
            name = self.take()
            if not name[0].isalpha():
                raise FormulaSyntaxError(f"expected a variable, got {name!r}", at)
            if name in ("exists", "forall", "free", "E"):
                raise FormulaSyntaxError(f"{name!r} is reserved", at)
            self.expect(".")
            stack = self.bound_set if name[0].isupper() else self.bound_vertex
            stack.append(name)
            body = self.formula()
            stack.pop()
            if tok == "exists":
                return ExistsSet(name, body) if name[0].isupper() else ExistsVertex(name, body)
            if name[0].isupper():
                return make_forall_set(name, body)
            return make_forall_vertex(name, body)
        return self.disj()

    def disj(self) -> Node:
        node = self.conj()
        while self.peek() == "|":
            self.take()
            node = make_or(node, self.conj())
        return node

    def conj(self) -> Node:
        node = self.lit()
        while self.peek() == "&":
            self.take()
            node = And(node, self.lit())
        return node

    def lit(self) -> Node:
        tok = self.peek()
        if tok == "!":
            self.take()
            return Not(self.lit())
        if tok == "(":
            self.take()
            node = self.formula()
            if self.peek() == "->":
                self.take()
                node = make_implies(node, self.formula())
            self.expect(")")
            return node
        return self.atom()

    def atom(self) -> Node:
        at = self.pos()
        tok = self.take()
        if not tok[0].isalpha():
            raise FormulaSyntaxError(f"expected an atom, got {tok!r}", at)
        if tok in ("exists", "forall"):
            raise FormulaSyntaxError(
                f"{tok!r} cannot start an operand; parenthesize the "
                f"quantified subformula", at)
        if tok == "E" and self.peek() == "(":
            self.take()
            x = self.vertex_use()
            self.expect(",")
            y = self.vertex_use()
            self.expect(")")
            return Edge(x, y)
        if tok[0].isupper():
            self.expect("(")
            x = self.vertex_use()
            self.expect(")")
            if tok not in self.bound_set and tok not in self.free_sets:
                raise FormulaSyntaxError(f"unbound set variable {tok!r}", at)
            return In(tok, x)
        if self.peek() == "=":
            self.take()
            at2 = self.pos()
            other = self.take()
            if not (other[0].isalpha() and other[0].islower()):
                raise FormulaSyntaxError(f"expected a vertex variable, got {other!r}", at2)
            self.check_vertex(tok, at)
            self.check_vertex(other, at2)
            return Eq(tok, other)
        self.check_vertex(tok, at)
        raise FormulaSyntaxError(f"vertex variable {tok!r} is not an atom by itself", at)

    def vertex_use(self) -> str:
        at = self.pos()
        tok = self.take()
        if not (tok[0].isalpha() and tok[0].islower()):
            raise FormulaSyntaxError(f"expected a vertex variable, got {tok!r}", at)
        self.check_vertex(tok, at)
        return tok

    def check_vertex(self, name: str, at: int) -> None:
        if name not in self.bound_vertex:
            raise FormulaSyntaxError(
                f"free individual variable {name!r} (only set variables may be free)", at)


def parse_formula(text: str) -> Formula:
    """Parse formula text, desugaring to the core connectives.

    Leading ``free X [Y ...]`` lines declare free set variables; their
    declaration order fixes the interpretation order.
    """
    free_sets: list[str] = []
    lines = text.splitlines()
    body_start = 0
    for line in lines:
        parts = line.split()
        if parts and parts[0] == "free":
            for name in parts[1:]:
                if not (name[0].isalpha() and name[0].isupper()):
                    raise FormulaSyntaxError(f"free variable {name!r} must be a set variable")
                if name in free_sets:
                    raise FormulaSyntaxError(f"duplicate free declaration of {name!r}")
                free_sets.append(name)
            body_start += 1
        else:
            break
    body = "\n".join(lines[body_start:])
    tokens = _tokenize(body)
    if not tokens:
        raise FormulaSyntaxError("empty formula")
    parser = _Parser(tokens, tuple(free_sets))
    root = parser.formula()
    if parser.peek() is not None:
        raise FormulaSyntaxError(f"trailing input {parser.peek()!r}", parser.pos())
    return Formula(root, tuple(free_sets))


# -- semantics ---------------------------------------------------------------

@dataclass(frozen=True)
class Interpretation:
    """A graph together with one vertex set per free set variable."""

    graph: Graph
    set_vals: tuple[VertexSet, ...] = ()

    def masks(self) -> tuple[int, ...]:
        for s in self.set_vals:
            if s.n != self.graph.n:
                raise ValueError("set value does not match the graph size")
        return tuple(s.mask for s in self.set_vals)


def _compile(node: Node, scope: dict[str, int], slots: list[int], g: Graph) -> Callable[[list], bool]:
    adj = g.adj
    n = g.n
    if isinstance(node, Edge):
        i, j = scope[node.x], scope[node.y]
        return lambda env: bool((adj[env[i]] >> env[j]) & 1)
    if isinstance(node, Eq):
        i, j = scope[node.x], scope[node.y]
        return lambda env: env[i] == env[j]
    if isinstance(node, In):
        s, i = scope[node.set_var], scope[node.x]
        return lambda env: bool((env[s] >> env[i]) & 1)
    if isinstance(node, Not):
        f = _compile(node.sub, scope, slots, g)
        return lambda env: not f(env)
    if isinstance(node, And):
        a = _compile(node.left, scope, slots, g)
        b = _compile(node.right, scope, slots, g)
        return lambda env: a(env) and b(env)
    if isinstance(node, (ExistsVertex, ExistsSet)):
        slot = len(slots)
        slots.append(0)
        inner = dict(scope)
        inner[node.var] = slot
        f = _compile(node.sub, inner, slots, g)
        count = n if isinstance(node, ExistsVertex) else 1 << n

        def exists(env, slot=slot, f=f, count=count):
            for val in range(count):
                env[slot] = val
                if f(env):
                    return True
            return False

        return exists
    raise TypeError(f"unknown node {node!r}")


def check_masks(g: Graph, phi: Formula, masks: tuple[int, ...]) -> bool:
    """Model check with free set variables bound to bitmasks."""
    if len(masks) != phi.arity:
        raise ValueError(
            f"arity mismatch: formula has {phi.arity} free set variables, "
            f"got {len(masks)} values")
    scope = {name: i for i, name in enumerate(phi.free_set_vars)}
    slots = [0] * phi.arity
    fn = _compile(phi.root, scope, slots, g)
    env = [0] * len(slots)
    env[:phi.arity] = masks
    return fn(env)


def model_check(interp: Interpretation, phi: Formula) -> bool:
    """Brute-force model checking: vertex quantifiers range over the n
    vertices, set quantifiers over all 2^n subsets."""
    return check_masks(interp.graph, phi, interp.masks())
