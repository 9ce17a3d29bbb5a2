"""From per-definition AMR graphs to one definitional digraph.

A definition AMR is *valid* when its root is ``define-01``, the root has a
single ``:ARG1`` pointing at an atomic node (the defined symbol) and a single
``:ARG2`` pointing at the AMR of the definition.  Invalid graphs that still
have a sound root and ``:ARG1`` can be patched with a separately parsed AMR of
the bare definition.  After sense selection every valid graph is turned into
arcs ``concept -> defined symbol`` and the union over the corpus is taken.
"""
from __future__ import annotations

import enum
import json
from dataclasses import asdict, dataclass, replace
from pathlib import Path
from typing import Iterable, NamedTuple

from .digraph import ArcAnnotations, Digraph
from .penman import AmrGraph, PenmanDocument, parse_id, read_corpus

DEFINE = "define-01"
ARG1 = ":ARG1"
ARG2 = ":ARG2"


class ValidityStatus(str, enum.Enum):
    VALID = "valid"
    MISSING_ARG1 = "missing_arg1"
    MISSING_ARG2 = "missing_arg2"
    WRONG_ROOT = "wrong_root"
    NON_ATOMIC_DEFINED = "non_atomic_defined"
    PATCHED = "patched"
    REJECTED = "rejected"


USABLE = (ValidityStatus.VALID, ValidityStatus.PATCHED)


class UnpatchableError(ValueError):
    pass


class InvalidEntryError(ValueError):
    pass


@dataclass(frozen=True)
class DefinitionEntry:
    lexeme: str
    sense: int
    amr: AmrGraph
    status: ValidityStatus | None = None
    replacement: AmrGraph | None = None
    reason: str | None = None

    @property
    def key(self) -> tuple[str, int]:
        return (self.lexeme, self.sense)


def validate(entry: DefinitionEntry | AmrGraph) -> ValidityStatus:
    """Classify a definition AMR; checks run in a fixed order, first failure wins."""
    g = entry.amr if isinstance(entry, DefinitionEntry) else entry
    if g.instances[g.root] != DEFINE:
        return ValidityStatus.WRONG_ROOT
    arg1 = g.role_targets(g.root, ARG1)
    if len(arg1) != 1:
        return ValidityStatus.MISSING_ARG1
    if g.out_edges(arg1[0]):
        return ValidityStatus.NON_ATOMIC_DEFINED
    if len(g.role_targets(g.root, ARG2)) != 1:
        return ValidityStatus.MISSING_ARG2
    return ValidityStatus.VALID


def defined_symbol(entry: DefinitionEntry) -> str:
    g = entry.amr
    return g.instances[g.role_targets(g.root, ARG1)[0]]


def _fresh(name: str, taken: set[str]) -> str:
    if name not in taken:
        return name
    i = 2
    while f"{name}{i}" in taken:
        i += 1
    return f"{name}{i}"


def patch(entry: DefinitionEntry, replacement_def: AmrGraph) -> DefinitionEntry:
    """Keep only the root and the defined node, then hang ``replacement_def`` under ``:ARG2``.

    A valid entry comes back unchanged.  Raises :class:`UnpatchableError`
    when the root is not ``define-01`` or the ``:ARG1`` node is missing or
    not atomic.
    """
    status = validate(entry)
    if status is ValidityStatus.VALID:
        return replace(entry, status=ValidityStatus.VALID)
    if status is not ValidityStatus.MISSING_ARG2:
        raise UnpatchableError(f"{entry.lexeme}.{entry.sense}: {status.value} cannot be patched")
    g = entry.amr
    root = g.root
    s = g.role_targets(root, ARG1)[0]
    instances = {root: DEFINE, s: g.instances[s]}
    rename = {}
    for var in replacement_def.instances:
        rename[var] = _fresh(var, set(instances) | set(rename.values()))
    for var, concept in replacement_def.instances.items():
        instances[rename[var]] = concept
    edges = [(root, ARG1, s), (root, ARG2, rename[replacement_def.root])]
    edges += [(rename[a], r, rename[b]) for a, r, b in replacement_def.edges]
    attrs = tuple((rename[a], r, c) for a, r, c in replacement_def.attributes)
    patched = AmrGraph(root, instances, tuple(edges), attrs)
    return replace(entry, amr=patched, status=ValidityStatus.PATCHED, reason=None)


def select_senses(entries: Iterable[DefinitionEntry]) -> tuple[list[DefinitionEntry], int, int]:
    """First-sense filtering, then symmetric removal of cross-lexeme label collisions.

    Returns ``(kept, polysemy_filtered, symbol_collisions)``; ``kept`` is
    sorted by defined label.
    """
    by_label: dict[str, dict[str, DefinitionEntry]] = {}
    polysemy = 0
    for e in entries:
        per_lexeme = by_label.setdefault(defined_symbol(e), {})
        prev = per_lexeme.get(e.lexeme)
        if prev is None:
            per_lexeme[e.lexeme] = e
            continue
        polysemy += 1
        if e.sense < prev.sense:
            per_lexeme[e.lexeme] = e
    kept = []
    collisions = 0
    for label in sorted(by_label):
        per_lexeme = by_label[label]
        if len(per_lexeme) > 1:
            collisions += len(per_lexeme)
            continue
        kept.extend(per_lexeme.values())
    return kept, polysemy, collisions


def bypass_root(entry: DefinitionEntry) -> tuple[set[tuple[str, str]], ArcAnnotations]:
    """Definitional arcs ``concept -> defined symbol`` and the AMR arcs they replace."""
    status = entry.status if entry.status is not None else validate(entry)
    if status not in USABLE or validate(entry) is not ValidityStatus.VALID:
        raise InvalidEntryError(f"{entry.lexeme}.{entry.sense} is not a valid definition AMR")
    g = entry.amr
    s = defined_symbol(entry)
    body = g.reachable(g.role_targets(g.root, ARG2)[0])
    inside = set(body)
    arcs = {(g.instances[v], s) for v in body}
    preserved = ArcAnnotations()
    for a, role, b in g.edges:
        if a in inside:
            preserved.add(g.instances[a], g.instances[b], role)
    return arcs, preserved


@dataclass
class PreprocessMetrics:
    definition_quantity: int = 0
    initial_invalid: int = 0
    saved: int = 0
    final_invalid: int = 0
    polysemy_filtered: int = 0
    symbol_collisions: int = 0
    final_quantity: int = 0

    def to_dict(self) -> dict[str, int]:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def balanced(self) -> bool:
        return self.final_quantity == (self.definition_quantity - self.final_invalid
                                       - self.polysemy_filtered - self.symbol_collisions)


class AmrDigraph(NamedTuple):
    graph: Digraph
    preserved: ArcAnnotations
    metrics: PreprocessMetrics

    def definitional_tags(self) -> ArcAnnotations:
        lab = self.graph.label
        return ArcAnnotations((((lab(u), lab(v)), [DEFINE]) for u, v in self.graph.arcs()))


def prepare(entries: Iterable[DefinitionEntry]) -> tuple[list[DefinitionEntry], PreprocessMetrics]:
    """Validate and patch every entry, then select senses."""
    m = PreprocessMetrics()
    usable = []
    seen = set()
    for e in entries:
        if e.key in seen:
            raise ValueError(f"duplicate definition {e.lexeme}.{e.sense}")
        seen.add(e.key)
        m.definition_quantity += 1
        status = validate(e)
        if status is ValidityStatus.VALID:
            if e.status is ValidityStatus.PATCHED:
                m.initial_invalid += 1
                m.saved += 1
                usable.append(e)
            else:
                usable.append(replace(e, status=status))
            continue
        m.initial_invalid += 1
        try:
            if e.replacement is None:
                raise UnpatchableError(f"{e.lexeme}.{e.sense}: {status.value}, no replacement definition")
            usable.append(patch(e, e.replacement))
            m.saved += 1
        except UnpatchableError:
            m.final_invalid += 1
    kept, m.polysemy_filtered, m.symbol_collisions = select_senses(usable)
    m.final_quantity = len(kept)
    return kept, m


def union_corpus(entries: Iterable[DefinitionEntry]) -> AmrDigraph:
    """Union of the per-definition digraphs, with the bookkeeping of every filter."""
    kept, m = prepare(entries)
    g = Digraph()
    preserved = ArcAnnotations()
    for e in kept:
        arcs, amr_arcs = bypass_root(e)
        g.add_vertex(defined_symbol(e))
        for u, v in sorted(arcs):
            g.add_arc(g.add_vertex(u), g.add_vertex(v))
        preserved.update(amr_arcs)
    return AmrDigraph(g, preserved, m)


def entries_from_documents(docs: Iterable[PenmanDocument]) -> list[DefinitionEntry]:
    """Pair ``::id lexeme.N`` blocks with their optional ``::def-amr lexeme.N`` companions."""
    docs = list(docs)
    replacements = {}
    for d in docs:
        target = d.metadata.get("def-amr")
        if target:
            replacements[parse_id(target)] = d.graph
    out = []
    for d in docs:
        if d.metadata.get("def-amr"):
            continue
        if d.id is None:
            raise ValueError("definition block without ::id")
        out.append(DefinitionEntry(d.lexeme, d.sense, d.graph, replacement=replacements.get((d.lexeme, d.sense))))
    return out


def load_amr_corpus(paths: str | Path | Iterable[str | Path]) -> list[DefinitionEntry]:
    if isinstance(paths, (str, Path)):
        paths = [paths]
    docs = []
    for p in paths:
        docs.extend(read_corpus(p))
    return entries_from_documents(docs)


def classify(entries: Iterable[DefinitionEntry]) -> dict[tuple[str, int], ValidityStatus]:
    """Final status of each entry after patching (``REJECTED`` when patching fails)."""
    out = {}
    for e in entries:
        status = validate(e)
        if status is not ValidityStatus.VALID and e.replacement is not None:
            try:
                status = patch(e, e.replacement).status
            except UnpatchableError:
                status = ValidityStatus.REJECTED
        elif status is not ValidityStatus.VALID:
            status = ValidityStatus.REJECTED
        out[e.key] = status
    return out
