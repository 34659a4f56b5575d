"""Command-line front end.

Subcommands: cover, rankwidth, check, kernelize-mc, kernelize-opt, solve.
Exit status: 0 success or true decision, 1 false decision, 2 usage or
input error, 3 budget (cap) exceeded.  Caps are surfaced as flags; the
MSOK_LOG environment variable sets the log level.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from .covers import rankwidth_cover
from .errors import CapExceededError, FormulaSyntaxError, GraphFormatError
from .games import DEFAULT_GAME_VERTEX_CAP
from .graphs import Graph, parse_graph
from .kernelize import (
    DEFAULT_OPT_MODULE_CAP,
    DEFAULT_REP_CAP,
    annotated_json,
    format_annotated,
    format_mc_kernel,
    kernelize_mc,
    kernelize_opt,
    mc_kernel_json,
    parse_annotated,
    satisfies_threshold,
    solve_annotated,
    solve_opt,
)
from .mso import model_check, parse_formula, Interpretation
from .rankwidth import DEFAULT_RW_CAP, SplitTree, rank_width

log = logging.getLogger("rwkernel")


@dataclass(frozen=True)
class RunConfig:
    """Parsed invocation: inputs, parameters, caps, and output flags."""

    subcommand: str
    graph_path: str | None = None
    formula_path: str | None = None
    d: int = 0
    r: int | None = None
    direction: str = "le"
    cap_rw: int = DEFAULT_RW_CAP
    cap_game: int = DEFAULT_GAME_VERTEX_CAP
    cap_rep: int = DEFAULT_REP_CAP
    cap_opt: int = DEFAULT_OPT_MODULE_CAP
    auto_solve: bool = False
    as_json: bool = False
    verbose: bool = False
    output: str | None = None

    def __post_init__(self):
        if self.d < 0:
            raise ValueError("-d must be nonnegative")
        for name in ("cap_rw", "cap_game", "cap_rep", "cap_opt"):
            if getattr(self, name) <= 0:
                raise ValueError(f"--{name.replace('_', '-')} must be positive")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rwkernel",
        description="Kernelization of MSO-definable graph problems via "
                    "rank-width-bounded modular covers.")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p: argparse.ArgumentParser, formula: bool = False) -> None:
        p.add_argument("graph", help="edge-list graph file")
        if formula:
            p.add_argument("formula", help="formula file")
        p.add_argument("--cap-rw", type=int, default=DEFAULT_RW_CAP,
                       help="max vertices for exact rank-width (default %(default)s)")
        p.add_argument("--cap-game", type=int, default=DEFAULT_GAME_VERTEX_CAP,
                       help="max vertices per side in type games (default %(default)s)")
        p.add_argument("--cap-rep", type=int, default=DEFAULT_REP_CAP,
                       help="max representative size (default %(default)s)")
        p.add_argument("--cap-opt", type=int, default=DEFAULT_OPT_MODULE_CAP,
                       help="max module size for subset searches and the "
                            "brute-force solver (default %(default)s)")
        p.add_argument("--json", action="store_true", help="emit JSON")
        p.add_argument("-o", metavar="PATH", dest="output", help="write output to PATH")

    p = sub.add_parser("cover", help="smallest rank-width-d modular cover")
    p.add_argument("-d", type=int, required=True)
    common(p)

    p = sub.add_parser("rankwidth", help="exact rank-width")
    p.add_argument("--verbose", action="store_true", help="also print the witness tree")
    common(p)

    p = sub.add_parser("check", help="model check a sentence")
    common(p, formula=True)

    p = sub.add_parser("kernelize-mc", help="model-checking kernel")
    p.add_argument("-d", type=int, required=True)
    common(p, formula=True)

    p = sub.add_parser("kernelize-opt", help="annotated optimization kernel")
    p.add_argument("-d", type=int, required=True)
    p.add_argument("--dir", dest="direction", choices=["le", "ge"], required=True)
    p.add_argument("-r", type=int, required=True, help="threshold")
    p.add_argument("--auto-solve", action="store_true",
                   help="solve outright when 2^k <= n instead of emitting")
    common(p, formula=True)

    p = sub.add_parser("solve", help="brute-force optimum (graph or annotated kernel)")
    p.add_argument("--dir", dest="direction", choices=["le", "ge"], default="le")
    p.add_argument("-r", type=int, help="threshold for the decision")
    common(p, formula=True)

    return parser


def _config(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        subcommand=args.subcommand,
        graph_path=getattr(args, "graph", None),
        formula_path=getattr(args, "formula", None),
        d=getattr(args, "d", 0),
        r=getattr(args, "r", None),
        direction=getattr(args, "direction", "le"),
        cap_rw=getattr(args, "cap_rw", DEFAULT_RW_CAP),
        cap_game=getattr(args, "cap_game", DEFAULT_GAME_VERTEX_CAP),
        cap_rep=getattr(args, "cap_rep", DEFAULT_REP_CAP),
        cap_opt=getattr(args, "cap_opt", DEFAULT_OPT_MODULE_CAP),
        auto_solve=getattr(args, "auto_solve", False),
        as_json=getattr(args, "json", False),
        verbose=getattr(args, "verbose", False),
        output=getattr(args, "output", None),
    )


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.output:
        Path(cfg.output).write_text(text)
    else:
        sys.stdout.write(text)


def _read(path: str) -> str:
    return Path(path).read_text()


def _witness_text(g: Graph, tree: SplitTree) -> str:
    if tree.is_leaf():
        return g.label_of((tree.members & -tree.members).bit_length() - 1)
    return f"({_witness_text(g, tree.left)} {_witness_text(g, tree.right)})"


def _looks_annotated(text: str) -> bool:
    head = text.lstrip()
    if head.startswith("{"):
        try:
            return json.loads(text).get("kind") == "annotated-kernel"
        except json.JSONDecodeError:
            return False
    return any(line.split()[:1] == ["dir"] for line in text.splitlines())


def _run_cover(cfg: RunConfig) -> int:
    g = parse_graph(_read(cfg.graph_path))
    cover = rankwidth_cover(g, cfg.d, cfg.cap_rw)
    classes = [[g.label_of(v) for v in c] for c in cover.classes]
    if cfg.as_json:
        _emit(cfg, json.dumps({"d": cfg.d, "k": cover.size, "classes": classes}) + "\n")
    else:
        lines = [f"d {cfg.d}", f"k {cover.size}"]
        lines += ["M " + " ".join(c) for c in classes]
        _emit(cfg, "\n".join(lines) + "\n")
    return 0


def _run_rankwidth(cfg: RunConfig) -> int:
    g = parse_graph(_read(cfg.graph_path))
    result = rank_width(g, cfg.cap_rw)
    if cfg.as_json:
        doc = {"width": result.width}
        if cfg.verbose and result.witness is not None:
            doc["witness"] = _witness_text(g, result.witness)
        _emit(cfg, json.dumps(doc) + "\n")
    else:
        lines = [f"width {result.width}"]
        if cfg.verbose and result.witness is not None:
            lines.append("witness " + _witness_text(g, result.witness))
        _emit(cfg, "\n".join(lines) + "\n")
    return 0


def _run_check(cfg: RunConfig) -> int:
    g = parse_graph(_read(cfg.graph_path))
    phi = parse_formula(_read(cfg.formula_path))
    if not phi.is_sentence():
        raise ValueError("check requires a sentence; use solve for formulas "
                         "with a free set variable")
    verdict = model_check(Interpretation(g), phi)
    if cfg.as_json:
        _emit(cfg, json.dumps({"verdict": verdict}) + "\n")
    else:
        _emit(cfg, ("true" if verdict else "false") + "\n")
    return 0 if verdict else 1


def _run_kernelize_mc(cfg: RunConfig) -> int:
    g = parse_graph(_read(cfg.graph_path))
    phi = parse_formula(_read(cfg.formula_path))
    kern = kernelize_mc(g, phi, cfg.d, cfg.cap_rep, cfg.cap_rw, cfg.cap_game)
    if cfg.as_json:
        _emit(cfg, json.dumps(mc_kernel_json(kern)) + "\n")
    else:
        _emit(cfg, format_mc_kernel(kern))
    return 0


def _run_kernelize_opt(cfg: RunConfig) -> int:
    g = parse_graph(_read(cfg.graph_path))
    phi = parse_formula(_read(cfg.formula_path))
    inst = kernelize_opt(g, phi, cfg.direction, cfg.r, cfg.d,
                         cfg.cap_rep, cfg.cap_rw, cfg.cap_game, cfg.cap_opt)
    k = len(inst.module_map)
    if cfg.auto_solve and 2 ** k <= g.n:
        value = solve_annotated(inst, phi, max(cfg.cap_opt, inst.graph.n))
        decision = satisfies_threshold(value, inst.direction, inst.r)
        if cfg.as_json:
            _emit(cfg, json.dumps({"kind": "solved", "optimum": value,
                                   "decision": decision}) + "\n")
        else:
            opt = "infeasible" if value is None else str(value)
            _emit(cfg, f"solved {'true' if decision else 'false'}\noptimum {opt}\n")
        return 0 if decision else 1
    if cfg.as_json:
        _emit(cfg, json.dumps(annotated_json(inst)) + "\n")
    else:
        _emit(cfg, format_annotated(inst))
    return 0


def _run_solve(cfg: RunConfig) -> int:
    text = _read(cfg.graph_path)
    phi = parse_formula(_read(cfg.formula_path))
    if _looks_annotated(text):
        inst = parse_annotated(text)
        value = solve_annotated(inst, phi, max(cfg.cap_opt, inst.graph.n))
        direction, r = inst.direction, inst.r if cfg.r is None else cfg.r
    else:
        g = parse_graph(text)
        value = solve_opt(g, phi, cfg.direction, cfg.cap_opt)
        direction, r = cfg.direction, cfg.r
    decision = satisfies_threshold(value, direction, r) if r is not None else None
    if cfg.as_json:
        _emit(cfg, json.dumps({"optimum": value, "decision": decision}) + "\n")
    else:
        lines = [f"optimum {'infeasible' if value is None else value}"]
        if decision is not None:
            lines.append(f"decision {'true' if decision else 'false'}")
        _emit(cfg, "\n".join(lines) + "\n")
    if decision is not None:
        return 0 if decision else 1
    return 0 if value is not None else 1


_RUNNERS = {
    "cover": _run_cover,
    "rankwidth": _run_rankwidth,
    "check": _run_check,
    "kernelize-mc": _run_kernelize_mc,
    "kernelize-opt": _run_kernelize_opt,
    "solve": _run_solve,
}


def main(argv: list[str] | None = None) -> int:
    level = os.environ.get("MSOK_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING))
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        cfg = _config(args)
        return _RUNNERS[cfg.subcommand](cfg)
    except CapExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (GraphFormatError, FormulaSyntaxError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
