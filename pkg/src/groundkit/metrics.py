"""Kernels, reduced kernels and the structural metrics reported for them."""
from __future__ import annotations

import csv
import io
from dataclasses import asdict, dataclass, fields
from typing import Iterable, Mapping

from .digraph import Digraph, strongly_connected_components
from .reductions import (
    CONFLUENT, KIND_ORDER, NONCONFLUENT, RHO_C, RHO_NC, ReductionTrace, reduce,
)


@dataclass
class KernelResult:
    kernel: Digraph
    nb_undefined: int
    nb_undefining: int


def kernel(g: Digraph) -> KernelResult:
    """Trim vertices of in-degree 0 (undefined) and out-degree 0 (undefining).

    Each pass first drops every vertex that currently has in-degree 0, then
    every vertex that then has out-degree 0; passes repeat until neither set
    is empty.  A self-loop counts towards both degrees.
    """
    h = g.copy()
    succ, pred = h._succ, h._pred
    undefined = undefining = 0
    cand_in = set(succ)
    cand_out = set(succ)
    while True:
        layer = [u for u in cand_in if u in succ and not pred[u]]
        cand_in = set()
        for u in layer:
            cand_in.update(succ[u])
        for u in layer:
            h.discard_vertex(u)
        undefined += len(layer)

        layer2 = [u for u in cand_out if u in succ and not succ[u]]
        cand_out = set()
        for u in layer2:
            cand_out.update(pred[u])
        for u in layer2:
            h.discard_vertex(u)
        undefining += len(layer2)
        if not layer and not layer2:
            break
    return KernelResult(h, undefined, undefining)


def density(n_vertices: int, n_arcs: int) -> float:
    """``|A| / (n (n - 1))`` rounded to 4 places; 0 when fewer than two vertices."""
    if n_vertices < 2:
        return 0.0
    return round(n_arcs / (n_vertices * (n_vertices - 1)), 4)


def _chain(first: ReductionTrace, second: ReductionTrace) -> ReductionTrace:
    out = ReductionTrace(first.initial_vertices, first.initial_arcs)
    out.included = first.included | second.included
    out.counts = {k: first.counts[k] + second.counts[k] for k in KIND_ORDER}
    out.isolated = first.isolated + second.isolated
    out.remaining_vertices = second.remaining_vertices
    out.remaining_arcs = second.remaining_arcs
    out.log = first.log + second.log
    return out


@dataclass
class PipelineResult:
    """Kernel plus confluent (and optionally non-confluent) reduction of one graph.

    Traces are relative to the *input* graph: vertices trimmed while
    extracting the kernel count as excluded, so
    ``remaining + included + excluded == nb_vertices``.
    """
    graph: Digraph
    kernel: KernelResult
    confluent: Digraph
    confluent_trace: ReductionTrace
    nonconfluent: Digraph | None = None
    nonconfluent_trace: ReductionTrace | None = None


def run_pipeline(g: Digraph, nonconfluent: bool = True, log: bool = False) -> PipelineResult:
    k = kernel(g)
    red_c, tr_c = reduce(k.kernel, CONFLUENT, RHO_C, log=log)
    tr_c.initial_vertices = g.num_vertices
    tr_c.initial_arcs = g.num_arcs
    res = PipelineResult(g, k, red_c, tr_c)
    if nonconfluent:
        # the non-confluent rules run on the confluently reduced kernel
        red_nc, tr_more = reduce(red_c, NONCONFLUENT, RHO_NC, log=log)
        res.nonconfluent = red_nc
        res.nonconfluent_trace = _chain(tr_c, tr_more)
    return res


@dataclass
class MetricsReport:
    nb_vertices: int = 0
    size_kernel: int = 0
    size_reduced_kernel: int = 0
    nc_reduced_kernel: int = 0
    init_nb_arcs: int = 0
    final_nb_arcs: int = 0
    nc_final_arcs: int = 0
    nb_undefined: int = 0
    nb_undefining: int = 0
    nb_sccs_kernel: int = 0
    kernel_nb_arcs: int = 0
    kernel_density: float = 0.0

    def to_dict(self) -> dict:
        return asdict(self)


ROW_LABELS = {
    "nb_vertices": "Nb vertices",
    "size_kernel": "Size Kernel",
    "size_reduced_kernel": "Size Red. Ker.",
    "nc_reduced_kernel": "NC Red Ker.",
    "init_nb_arcs": "Init. Nb Arcs",
    "final_nb_arcs": "Final Nb Arcs",
    "nc_final_arcs": "NC Final Arcs",
    "nb_undefined": "Nb Undefined",
    "nb_undefining": "Nb Undefining",
    "nb_sccs_kernel": "Nb SCCs Kernel",
    "kernel_nb_arcs": "Kernel Nb Arcs",
    "kernel_density": "Kernel Density",
}


def metrics(result: PipelineResult) -> MetricsReport:
    g, ker = result.graph, result.kernel.kernel
    nc = result.nonconfluent if result.nonconfluent is not None else result.confluent
    return MetricsReport(
        nb_vertices=g.num_vertices,
        size_kernel=ker.num_vertices,
        size_reduced_kernel=result.confluent.num_vertices,
        nc_reduced_kernel=nc.num_vertices,
        init_nb_arcs=g.num_arcs,
        final_nb_arcs=result.confluent.num_arcs,
        nc_final_arcs=nc.num_arcs,
        nb_undefined=result.kernel.nb_undefined,
        nb_undefining=result.kernel.nb_undefining,
        nb_sccs_kernel=len(strongly_connected_components(ker)),
        kernel_nb_arcs=ker.num_arcs,
        kernel_density=density(ker.num_vertices, ker.num_arcs),
    )


def analyze(g: Digraph) -> tuple[MetricsReport, PipelineResult]:
    res = run_pipeline(g)
    return metrics(res), res


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.4f}"
    return f"{value:,}".replace(",", " ")


def format_table(reports: Mapping[str, MetricsReport]) -> str:
    """Aligned text table, one column per named report."""
    names = list(reports)
    rows = [[""] + names]
    for f in fields(MetricsReport):
        rows.append([ROW_LABELS[f.name]] + [_fmt(getattr(reports[n], f.name)) for n in names])
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    lines = []
    for r in rows:
        cells = [r[0].ljust(widths[0])] + [c.rjust(w) for c, w in zip(r[1:], widths[1:])]
        lines.append("  ".join(cells).rstrip())
    return "\n".join(lines) + "\n"


def to_csv(reports: Mapping[str, MetricsReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["graph"] + [f.name for f in fields(MetricsReport)])
    for name, rep in reports.items():
        w.writerow([name] + [getattr(rep, f.name) for f in fields(MetricsReport)])
    return buf.getvalue()


def common_symbols(graphs: Iterable[Digraph]) -> list[str]:
    """Labels present in every graph, sorted."""
    graphs = list(graphs)
    if not graphs:
        raise ValueError("need at least one graph")
    common = set(graphs[0].labels())
    for g in graphs[1:]:
        common &= set(g.labels())
    return sorted(common)
