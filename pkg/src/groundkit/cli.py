"""``groundkit`` command line."""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import amr, dictionary, metrics, oracle
from .digraph import ArcListFormatError, Digraph, parse_dot, read_arc_list, to_dot, write_arc_list
from .penman import PenmanError
from .synthetic import random_digraph

EXIT_OK, EXIT_IO, EXIT_FORMAT, EXIT_CAP, EXIT_VERIFY = 0, 1, 2, 3, 4
MAX_CAP = 24


class VerificationError(Exception):
    pass


def _workers(n_jobs: int) -> int:
    raw = os.environ.get("GROUNDKIT_THREADS")
    limit = os.cpu_count() or 1
    if raw:
        try:
            limit = max(1, int(raw))
        except ValueError:
            raise SystemExit(f"GROUNDKIT_THREADS must be an integer, got {raw!r}")
    return max(1, min(limit, n_jobs))


def _out_dir(args) -> Path:
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=False) + "\n", encoding="utf-8")


def probe_kind(path: Path) -> str:
    """Guess the input format from its first meaningful line."""
    if path.suffix == ".jsonl":
        return "dictionary-jsonl"
    if path.suffix == ".dot":
        return "dot"
    with open(path, encoding="utf-8") as f:
        for line in f:
            s = line.strip()
            if not s:
                continue
            if s.startswith("{"):
                return "dictionary-jsonl"
            if s.startswith("(") or s.startswith("# ::"):
                return "penman-corpus"
            if s.startswith("digraph"):
                return "dot"
            if s.startswith("#"):
                continue
            return "arc-list"
    return "arc-list"


def load_graph(path: str | Path) -> Digraph:
    path = Path(path)
    if probe_kind(path) == "dot":
        return parse_dot(path.read_text(encoding="utf-8"))[0]
    return read_arc_list(path)[0]


# -- commands ------------------------------------------------------------------------------


def cmd_build(args) -> int:
    paths = [Path(p) for p in args.inputs]
    kinds = {args.kind or probe_kind(p) for p in paths}
    if len(kinds) != 1:
        raise ValueError(f"inputs mix formats: {sorted(kinds)}")
    kind = kinds.pop()
    out = _out_dir(args)
    if kind == "penman-corpus":
        result = amr.union_corpus(amr.load_amr_corpus(paths))
        write_arc_list(out / "graph.arcs", result.graph, result.definitional_tags())
        write_arc_list(out / "amr_arcs.arcs", Digraph.from_arcs(result.preserved.arcs()), result.preserved)
        _write_json(out / "metrics.json", result.metrics.to_dict())
        print(result.metrics.to_json())
        g = result.graph
    elif kind == "dictionary-jsonl":
        merged: dict[str, list[str]] = {}
        for p in paths:
            for lex, defs in dictionary.read_dictionary(p).items():
                merged.setdefault(lex, []).extend(defs)
        stop = dictionary.read_stoplist(args.stoplist) if args.stoplist else set()
        g = dictionary.build_dictionary_digraph(merged, stop)
        write_arc_list(out / "graph.arcs", g)
    else:
        raise ValueError(f"build expects a PENMAN corpus or a dictionary, got {kind}")
    print(f"{g.num_vertices} vertices, {g.num_arcs} arcs -> {out / 'graph.arcs'}", file=sys.stderr)
    return EXIT_OK


def cmd_kernel(args) -> int:
    g = load_graph(args.input)
    k = metrics.kernel(g)
    out = _out_dir(args)
    write_arc_list(out / "kernel.arcs", k.kernel)
    summary = {"nb_vertices": g.num_vertices, "size_kernel": k.kernel.num_vertices,
               "kernel_nb_arcs": k.kernel.num_arcs, "nb_undefined": k.nb_undefined,
               "nb_undefining": k.nb_undefining}
    _write_json(out / "kernel.json", summary)
    print(json.dumps(summary, indent=2))
    return EXIT_OK


def verify_reduction(g: Digraph, reduced: Digraph, included: set[int], cap: int) -> None:
    before = oracle.exact_mfvs(g, cap, all_witnesses=False)
    after = oracle.exact_mfvs(reduced, cap)
    if before.size != len(included) + after.size:
        raise VerificationError(
            f"mfvs(G) = {before.size} but |U| + mfvs(G') = {len(included)} + {after.size}")
    # reduced shares the label table of g, so witness indices carry over
    for w in after.witnesses:
        if not oracle.is_fvs(g, set(w) | included):
            raise VerificationError(f"lifted witness {sorted(g.label(u) for u in w)} is not an FVS of G")


def cmd_reduce(args) -> int:
    g = load_graph(args.input)
    res = metrics.run_pipeline(g, nonconfluent=args.mode == "nonconfluent", log=True)
    reduced, trace = ((res.nonconfluent, res.nonconfluent_trace) if args.mode == "nonconfluent"
                      else (res.confluent, res.confluent_trace))
    out = _out_dir(args)
    write_arc_list(out / "reduced.arcs", reduced)
    payload = {"mode": args.mode, "initial_vertices": g.num_vertices, "initial_arcs": g.num_arcs,
               "kernel_vertices": res.kernel.kernel.num_vertices, "remaining_arcs": reduced.num_arcs,
               **trace.to_dict(g, with_log=True)}
    _write_json(out / "trace.json", payload)
    labels = [g.label(u) for u in sorted(trace.included, key=g.label)]
    (out / "partial_mfvs.txt").write_text("".join(f"{s}\n" for s in labels), encoding="utf-8")
    summary = {k: v for k, v in payload.items() if k != "log"}
    if args.verify:
        verify_reduction(g, reduced, trace.included, args.max_n)
        summary["verified"] = True
    print(json.dumps(summary, indent=2))
    return EXIT_OK


def _stats_one(path: str) -> tuple[str, dict]:
    report, _ = metrics.analyze(load_graph(path))
    return path, report.to_dict()


def cmd_stats(args) -> int:
    n = _workers(len(args.inputs))
    if n > 1:
        with ProcessPoolExecutor(max_workers=n) as ex:
            done = list(ex.map(_stats_one, args.inputs))
    else:
        done = [_stats_one(p) for p in args.inputs]
    reports = {Path(p).stem if len({Path(q).stem for q in args.inputs}) == len(args.inputs) else p:
               metrics.MetricsReport(**d) for p, d in sorted(done)}
    print(metrics.format_table(reports), end="")
    if args.out:
        out = _out_dir(args)
        _write_json(out / "metrics.json", {k: r.to_dict() for k, r in reports.items()})
        (out / "metrics.csv").write_text(metrics.to_csv(reports), encoding="utf-8")
    return EXIT_OK


def cmd_mfvs(args) -> int:
    g = load_graph(args.input)
    res = oracle.exact_mfvs(g, args.max_n, all_witnesses=False)
    payload = {"size": res.size, "witness": sorted(g.label(u) for u in res.witness)}
    print(json.dumps(payload, indent=2))
    if args.out:
        _write_json(_out_dir(args) / "mfvs.json", payload)
    return EXIT_OK


def cmd_common(args) -> int:
    labels = metrics.common_symbols(load_graph(p) for p in args.inputs)
    text = "".join(f"{s}\n" for s in labels)
    sys.stdout.write(text)
    if args.out:
        (_out_dir(args) / "common.txt").write_text(text, encoding="utf-8")
    return EXIT_OK


def cmd_export_dot(args) -> int:
    g, notes = read_arc_list(args.input)
    dot = to_dot(g, notes)
    if args.out:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        Path(args.out).write_text(dot, encoding="utf-8")
    else:
        sys.stdout.write(dot)
    return EXIT_OK


def cmd_selftest(args) -> int:
    """Random graphs through the full pipeline, checked against the exact solver."""
    rng = random.Random(args.seed)
    n_max = min(args.max_n, 10)
    for i in range(args.count):
        g = random_digraph(rng.randint(1, n_max), rng.choice((0.1, 0.2, 0.3)), seed=rng.randrange(2**32))
        res = metrics.run_pipeline(g)
        for red, tr in ((res.confluent, res.confluent_trace), (res.nonconfluent, res.nonconfluent_trace)):
            try:
                verify_reduction(g, red, tr.included, args.max_n)
            except VerificationError as exc:
                print(f"graph {i}: {exc}\narcs: {g.label_arcs()}", file=sys.stderr)
                return EXIT_VERIFY
    print(f"selftest ok: {args.count} graphs, seed {args.seed}")
    return EXIT_OK


# -- entry point ---------------------------------------------------------------------------


def _cap(value: str) -> int:
    n = int(value)
    if not 0 <= n <= MAX_CAP:
        raise argparse.ArgumentTypeError(f"--max-n must lie in [0, {MAX_CAP}]")
    return n


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="groundkit", description="Definitional digraphs, kernels and MFVS reductions.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(func=fn)
        sp.add_argument("--out", help="output directory (file for export-dot)")
        sp.add_argument("--max-n", type=_cap, default=oracle.DEFAULT_CAP,
                        help=f"largest graph handed to the exact solver (<= {MAX_CAP})")
        sp.add_argument("--seed", type=int, default=0)
        return sp

    sp = add("build", cmd_build, "build a definitional digraph from a PENMAN corpus or JSONL dictionary")
    sp.add_argument("inputs", nargs="+")
    sp.add_argument("--kind", choices=("penman-corpus", "dictionary-jsonl"))
    sp.add_argument("--stoplist")
    sp = add("kernel", cmd_kernel, "trim undefined and undefining vertices")
    sp.add_argument("input")
    sp = add("reduce", cmd_reduce, "kernel, then MFVS-preserving reductions")
    sp.add_argument("input")
    sp.add_argument("--mode", choices=("confluent", "nonconfluent"), default="confluent")
    sp.add_argument("--verify", action="store_true", help="check the MFVS identity with the exact solver")
    sp = add("stats", cmd_stats, "structural metrics table")
    sp.add_argument("inputs", nargs="+")
    sp = add("mfvs", cmd_mfvs, "exact minimum feedback vertex set of a small graph")
    sp.add_argument("input")
    sp = add("common", cmd_common, "labels shared by every graph")
    sp.add_argument("inputs", nargs="+")
    sp = add("export-dot", cmd_export_dot, "arc list to Graphviz DOT")
    sp.add_argument("input")
    sp = add("selftest", cmd_selftest, "randomized check of the reduction pipeline")
    sp.add_argument("--count", type=int, default=100)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except oracle.CapExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except VerificationError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (PenmanError, ArcListFormatError, dictionary.DictionaryFormatError,
            UnicodeDecodeError, json.JSONDecodeError, ValueError) as exc:
        print(f"format error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
