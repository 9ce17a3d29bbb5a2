"""Grounding-set analysis of definitional digraphs."""
from .digraph import (
    ArcAnnotations, ArcListFormatError, Digraph, GraphError, UnknownArcError, UnknownVertexError,
    bidirectional_arcs, contract, is_diclique, loads_arc_list, parse_dot, read_arc_list, remove_arc,
    remove_vertex, strongly_connected_components, to_dot, write_arc_list,
)
from .metrics import KernelResult, MetricsReport, common_symbols, density, kernel, run_pipeline
from .oracle import CapExceededError, check_preservation, exact_mfvs, is_fvs, mfvs_size
from .reductions import (
    CONFLUENT, NONCONFLUENT, RHO_C, RHO_NC, ReductionKind, ReductionTrace, apply, holds, reduce,
    reduce_confluent, reduce_nonconfluent,
)

__version__ = "0.1.0"

__all__ = [
    "ArcAnnotations",
    "ArcListFormatError",
    "CONFLUENT",
    "CapExceededError",
    "Digraph",
    "GraphError",
    "KernelResult",
    "MetricsReport",
    "NONCONFLUENT",
    "RHO_C",
    "RHO_NC",
    "ReductionKind",
    "ReductionTrace",
    "UnknownArcError",
    "UnknownVertexError",
    "apply",
    "bidirectional_arcs",
    "check_preservation",
    "common_symbols",
    "contract",
    "density",
    "exact_mfvs",
    "holds",
    "is_diclique",
    "is_fvs",
    "kernel",
    "loads_arc_list",
    "mfvs_size",
    "parse_dot",
    "read_arc_list",
    "reduce",
    "reduce_confluent",
    "reduce_nonconfluent",
    "remove_arc",
    "remove_vertex",
    "run_pipeline",
    "strongly_connected_components",
    "to_dot",
    "write_arc_list",
]
