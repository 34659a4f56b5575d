"""Kernelization of MSO-definable graph problems, parameterized by the
size of the smallest modular cover whose classes induce subgraphs of
bounded rank-width."""

from .covers import (
    Cover,
    cover_violation,
    equivalent_d,
    minimal_module,
    neighborhood_diversity,
    rankwidth_cover,
    verify_cover,
)
from .errors import CapExceededError, FormulaSyntaxError, GraphFormatError
from .games import (
    GamePosition,
    duplicator_wins,
    mso_type,
    partial_isomorphism,
    types_equal,
)
from .graphs import (
    Graph,
    VertexSet,
    cut_rank,
    format_graph,
    induced_subgraph,
    is_module,
    modules_adjacent,
    parse_graph,
)
from .kernelize import (
    AnnotatedInstance,
    Annotation,
    McKernel,
    annotation_value,
    encoding_bits,
    enumerate_graphs,
    find_representative,
    format_annotated,
    format_mc_kernel,
    kernelize_mc,
    kernelize_opt,
    parse_annotated,
    satisfies_threshold,
    solve_annotated,
    solve_opt,
    trivial_annotation,
)
from .mso import (
    Formula,
    Interpretation,
    model_check,
    parse_formula,
    quantifier_rank,
)
from .rankwidth import (
    RankWidthResult,
    SplitTree,
    rank_width,
    rank_width_at_most,
    witness_width,
)

__version__ = "0.1.0"

__all__ = [
    "AnnotatedInstance",
    "Annotation",
    "CapExceededError",
    "Cover",
    "Formula",
    "FormulaSyntaxError",
    "GamePosition",
    "Graph",
    "GraphFormatError",
    "Interpretation",
    "McKernel",
    "RankWidthResult",
    "SplitTree",
    "VertexSet",
    "annotation_value",
    "cover_violation",
    "cut_rank",
    "duplicator_wins",
    "encoding_bits",
    "enumerate_graphs",
    "equivalent_d",
    "find_representative",
    "format_annotated",
    "format_graph",
    "format_mc_kernel",
    "induced_subgraph",
    "is_module",
    "kernelize_mc",
    "kernelize_opt",
    "minimal_module",
    "model_check",
    "modules_adjacent",
    "mso_type",
    "neighborhood_diversity",
    "parse_annotated",
    "parse_formula",
    "parse_graph",
    "partial_isomorphism",
    "quantifier_rank",
    "rank_width",
    "rank_width_at_most",
    "rankwidth_cover",
    "satisfies_threshold",
    "solve_annotated",
    "solve_opt",
    "trivial_annotation",
    "types_equal",
    "verify_cover",
    "witness_width",
]
