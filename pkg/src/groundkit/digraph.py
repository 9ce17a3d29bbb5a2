"""Labeled directed graphs with self-loops.

Vertices are dense integer indices interned from string labels.  Removing a
vertex tombstones its index, so indices stay stable for the lifetime of a
graph (reduction traces name vertices by index).  All enumeration is in
ascending index order.

Methods mutate in place; the module-level functions :func:`remove_vertex`,
:func:`remove_arc` and :func:`contract` return a modified copy.
"""
from __future__ import annotations

import re
from collections import defaultdict
from pathlib import Path
from typing import Iterable, Iterator, TextIO

Arc = tuple[int, int]

__all__ = [
    "Arc",
    "ArcAnnotations",
    "ArcListFormatError",
    "Digraph",
    "GraphError",
    "UnknownArcError",
    "UnknownVertexError",
    "arc_is_acyclic",
    "bidirectional_arcs",
    "contract",
    "dumps_arc_list",
    "is_diclique",
    "loads_arc_list",
    "parse_dot",
    "read_arc_list",
    "remove_arc",
    "remove_vertex",
    "strongly_connected_components",
    "to_dot",
    "write_arc_list",
]


class GraphError(Exception):
    pass


class UnknownVertexError(GraphError, KeyError):
    def __str__(self) -> str:
        return f"unknown vertex: {self.args[0]!r}"


class UnknownArcError(GraphError, KeyError):
    def __str__(self) -> str:
        return f"unknown arc: {self.args[0]!r}"


class ArcListFormatError(GraphError, ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class Digraph:
    """Directed graph ``(V, A)`` with arcs stored as a set (no multi-arcs)."""

    __slots__ = ("_labels", "_index", "_succ", "_pred", "_narcs")

    def __init__(self) -> None:
        self._labels: list[str] = []
        self._index: dict[str, int] = {}
        self._succ: dict[int, set[int]] = {}
        self._pred: dict[int, set[int]] = {}
        self._narcs = 0

    @classmethod
    def from_arcs(cls, arcs: Iterable[tuple[str, str]], vertices: Iterable[str] = ()) -> "Digraph":
        g = cls()
        for label in vertices:
            g.add_vertex(label)
        for u, v in arcs:
            g.add_arc(g.add_vertex(u), g.add_vertex(v))
        return g

    @classmethod
    def from_edges(cls, n: int, arcs: Iterable[Arc]) -> "Digraph":
        """Graph on vertices ``0..n-1`` labeled by their decimal index."""
        g = cls()
        for i in range(n):
            g.add_vertex(str(i))
        for u, v in arcs:
            g.add_arc(u, v)
        return g

    # -- construction -------------------------------------------------------

    def add_vertex(self, label: str) -> int:
        if not label:
            raise ValueError("vertex labels must be non-empty")
        u = self._index.get(label)
        if u is None:
            u = len(self._labels)
            self._labels.append(label)
            self._index[label] = u
        if u not in self._succ:
            self._succ[u] = set()
            self._pred[u] = set()
        return u

    def add_arc(self, u: int, v: int) -> bool:
        """Add ``(u, v)``; return False if it was already present."""
        self._check_vertex(u)
        self._check_vertex(v)
        succ = self._succ[u]
        if v in succ:
            return False
        succ.add(v)
        self._pred[v].add(u)
        self._narcs += 1
        return True

    def copy(self) -> "Digraph":
        g = Digraph.__new__(Digraph)
        g._labels = list(self._labels)
        g._index = dict(self._index)
        g._succ = {u: set(s) for u, s in self._succ.items()}
        g._pred = {u: set(p) for u, p in self._pred.items()}
        g._narcs = self._narcs
        return g

    # -- queries ------------------------------------------------------------

    def _check_vertex(self, u: int) -> None:
        if u not in self._succ:
            raise UnknownVertexError(u)

    def __contains__(self, u: object) -> bool:
        return u in self._succ

    def __len__(self) -> int:
        return len(self._succ)

    @property
    def num_vertices(self) -> int:
        return len(self._succ)

    @property
    def num_arcs(self) -> int:
        return self._narcs

    def vertices(self) -> list[int]:
        return sorted(self._succ)

    def arcs(self) -> Iterator[Arc]:
        for u in sorted(self._succ):
            for v in sorted(self._succ[u]):
                yield (u, v)

    def has_arc(self, u: int, v: int) -> bool:
        s = self._succ.get(u)
        return s is not None and v in s

    def has_loop(self, u: int) -> bool:
        self._check_vertex(u)
        return u in self._succ[u]

    def successors(self, u: int) -> set[int]:
        """Out-neighborhood N+(u).  The returned set is live; do not mutate."""
        try:
            return self._succ[u]
        except KeyError:
            raise UnknownVertexError(u) from None

    def predecessors(self, u: int) -> set[int]:
        """In-neighborhood N-(u).  The returned set is live; do not mutate."""
        try:
            return self._pred[u]
        except KeyError:
            raise UnknownVertexError(u) from None

    def in_degree(self, u: int) -> int:
        return len(self.predecessors(u))

    def out_degree(self, u: int) -> int:
        return len(self.successors(u))

    def label(self, u: int) -> str:
        return self._labels[u]

    def index(self, label: str) -> int:
        u = self._index.get(label)
        if u is None or u not in self._succ:
            raise UnknownVertexError(label)
        return u

    def labels(self) -> list[str]:
        return [self._labels[u] for u in sorted(self._succ)]

    def label_arcs(self) -> set[tuple[str, str]]:
        lab = self._labels
        return {(lab[u], lab[v]) for u, s in self._succ.items() for v in s}

    def same_as(self, other: "Digraph") -> bool:
        """Equality of labeled vertex and arc sets (indices ignored)."""
        return set(self.labels()) == set(other.labels()) and self.label_arcs() == other.label_arcs()

    def __repr__(self) -> str:
        return f"<Digraph |V|={self.num_vertices} |A|={self.num_arcs}>"

    # -- in-place mutation ----------------------------------------------------

    def discard_arc(self, u: int, v: int) -> None:
        if not self.has_arc(u, v):
            raise UnknownArcError((u, v))
        self._succ[u].discard(v)
        self._pred[v].discard(u)
        self._narcs -= 1

    def discard_vertex(self, u: int) -> None:
        self._check_vertex(u)
        succ = self._succ.pop(u)
        pred = self._pred.pop(u)
        for v in succ:
            if v != u:
                self._pred[v].discard(u)
        for p in pred:
            if p != u:
                self._succ[p].discard(u)
        self._narcs -= len(succ) + len(pred) - (1 if u in succ else 0)

    def contract_vertex(self, u: int) -> list[Arc]:
        """Replace ``u`` by arcs ``N-(u) x N+(u)``; return the arcs actually added."""
        self._check_vertex(u)
        pred = [p for p in self._pred[u] if p != u]
        succ = [s for s in self._succ[u] if s != u]
        self.discard_vertex(u)
        added = []
        for p in pred:
            ps = self._succ[p]
            for s in succ:
                if s not in ps:
                    ps.add(s)
                    self._pred[s].add(p)
                    added.append((p, s))
        self._narcs += len(added)
        return added


# -- functional forms ----------------------------------------------------------


def remove_vertex(g: Digraph, u: int) -> Digraph:
    """``G - u``."""
    g._check_vertex(u)
    h = g.copy()
    h.discard_vertex(u)
    return h


def remove_arc(g: Digraph, arc: Arc) -> Digraph:
    """``G - (u, v)``."""
    if not g.has_arc(*arc):
        raise UnknownArcError(arc)
    h = g.copy()
    h.discard_arc(*arc)
    return h


def contract(g: Digraph, u: int) -> Digraph:
    """``G o u``: delete ``u`` and link every predecessor to every successor."""
    g._check_vertex(u)
    h = g.copy()
    h.contract_vertex(u)
    return h


def is_diclique(g: Digraph, vertices: Iterable[int]) -> bool:
    us = list(vertices)
    for u in us:
        g._check_vertex(u)
    for u in us:
        s = g._succ[u]
        if u in s:
            return False
        for v in us:
            if v != u and v not in s:
                return False
    return True


def bidirectional_arcs(g: Digraph) -> set[Arc]:
    """``A<->``: arcs whose reverse is also present (self-loops included)."""
    succ = g._succ
    return {(u, v) for u, s in succ.items() for v in s if u in succ[v]}


def strongly_connected_components(g: Digraph, *, skip_bidirectional: bool = False) -> list[list[int]]:
    """Tarjan's algorithm, iterative.

    Components are returned with members sorted, ordered by smallest member.
    With ``skip_bidirectional`` the components are those of ``G - A<->``.
    """
    succ = g._succ
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0

    def out(v: int) -> list[int]:
        if skip_bidirectional:
            return [w for w in succ[v] if v not in succ[w]]
        return list(succ[v])

    for root in sorted(succ):
        if root in index:
            continue
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        work = [(root, iter(out(root)))]
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(out(w))))
                    advanced = True
                    break
                if w in on_stack and index[w] < low[v]:
                    low[v] = index[w]
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                if low[v] < low[parent]:
                    low[parent] = low[v]
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                comp.sort()
                comps.append(comp)
    comps.sort(key=lambda c: c[0])
    return comps


def component_map(g: Digraph, *, skip_bidirectional: bool = False) -> dict[int, int]:
    comp_of = {}
    for i, comp in enumerate(strongly_connected_components(g, skip_bidirectional=skip_bidirectional)):
        for v in comp:
            comp_of[v] = i
    return comp_of


def _reaches(g: Digraph, source: int, target: int) -> bool:
    seen = {source}
    todo = [source]
    succ = g._succ
    while todo:
        x = todo.pop()
        for y in succ[x]:
            if y == target:
                return True
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return False


def arc_is_acyclic(g: Digraph, arc: Arc) -> bool:
    """True iff no circuit visits ``arc``, i.e. ``v`` does not reach ``u``."""
    u, v = arc
    if not g.has_arc(u, v):
        raise UnknownArcError(arc)
    if u == v:
        return False
    return not _reaches(g, v, u)


# -- annotations ------------------------------------------------------------------


class ArcAnnotations:
    """Relation tags attached to label-keyed arcs, e.g. ``("fruit", "apple") -> {"define-01"}``."""

    def __init__(self, items: Iterable[tuple[tuple[str, str], Iterable[str]]] = ()):
        self._tags: dict[tuple[str, str], set[str]] = defaultdict(set)
        for arc, tags in items:
            self._tags[arc].update(tags)

    def add(self, u: str, v: str, tag: str) -> None:
        self._tags[(u, v)].add(tag)

    def update(self, other: "ArcAnnotations") -> None:
        for arc, tags in other._tags.items():
            self._tags[arc].update(tags)

    def tags(self, u: str, v: str) -> set[str]:
        return set(self._tags.get((u, v), ()))

    def arcs(self) -> list[tuple[str, str]]:
        return sorted(self._tags)

    def items(self) -> Iterator[tuple[tuple[str, str], set[str]]]:
        for arc in sorted(self._tags):
            yield arc, self._tags[arc]

    def __len__(self) -> int:
        return len(self._tags)

    def __contains__(self, arc: object) -> bool:
        return arc in self._tags

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ArcAnnotations):
            return NotImplemented
        return dict(self._tags) == dict(other._tags)

    def __repr__(self) -> str:
        return f"ArcAnnotations({dict(self._tags)!r})"


# -- arc-list text format ----------------------------------------------------------
#
# One arc per line: ``u<TAB>v[<TAB>tag]``.  A single-field line declares an
# isolated vertex.  Lines starting with ``#`` and blank lines are ignored.


def loads_arc_list(text: str | Iterable[str]) -> tuple[Digraph, ArcAnnotations]:
    lines = text.splitlines() if isinstance(text, str) else text
    g = Digraph()
    notes = ArcAnnotations()
    for lineno, raw in enumerate(lines, 1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) == 1:
            g.add_vertex(fields[0])
            continue
        if len(fields) > 3:
            raise ArcListFormatError(f"expected at most 3 tab-separated fields, got {len(fields)}", lineno)
        u, v = fields[0], fields[1]
        if not u or not v:
            raise ArcListFormatError("empty vertex label", lineno)
        g.add_arc(g.add_vertex(u), g.add_vertex(v))
        if len(fields) == 3 and fields[2]:
            for tag in fields[2].split(","):
                notes.add(u, v, tag)
    return g, notes


def read_arc_list(path: str | Path) -> tuple[Digraph, ArcAnnotations]:
    with open(path, encoding="utf-8") as f:
        return loads_arc_list(f)


def dumps_arc_list(g: Digraph, notes: ArcAnnotations | None = None) -> str:
    out = []
    lab = g._labels
    for u in g.vertices():
        if not g._succ[u] and not g._pred[u]:
            out.append(lab[u])
    for u, v in g.arcs():
        tags = notes.tags(lab[u], lab[v]) if notes is not None else ()
        if tags:
            out.append(f"{lab[u]}\t{lab[v]}\t{','.join(sorted(tags))}")
        else:
            out.append(f"{lab[u]}\t{lab[v]}")
    return "".join(line + "\n" for line in out)


def write_arc_list(path: str | Path, g: Digraph, notes: ArcAnnotations | None = None) -> None:
    Path(path).write_text(dumps_arc_list(g, notes), encoding="utf-8")


def write_annotations(f: TextIO, notes: ArcAnnotations) -> None:
    for (u, v), tags in notes.items():
        f.write(f"{u}\t{v}\t{','.join(sorted(tags))}\n")


# -- DOT -----------------------------------------------------------------------------


def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(g: Digraph, notes: ArcAnnotations | None = None, name: str = "G") -> str:
    lab = g._labels
    lines = [f"digraph {_dot_quote(name)} {{"]
    for u in g.vertices():
        lines.append(f"  {_dot_quote(lab[u])};")
    for u, v in g.arcs():
        tags = notes.tags(lab[u], lab[v]) if notes is not None else ()
        attr = f" [label={_dot_quote(','.join(sorted(tags)))}]" if tags else ""
        lines.append(f"  {_dot_quote(lab[u])} -> {_dot_quote(lab[v])}{attr};")
    lines.append("}")
    return "\n".join(lines) + "\n"


_DOT_STR = r'"((?:[^"\\]|\\.)*)"'
_DOT_NODE = re.compile(rf"^\s*{_DOT_STR}\s*;\s*$")
_DOT_EDGE = re.compile(rf"^\s*{_DOT_STR}\s*->\s*{_DOT_STR}\s*(?:\[label={_DOT_STR}\])?\s*;\s*$")


def _dot_unquote(s: str) -> str:
    return re.sub(r"\\(.)", r"\1", s)


def parse_dot(text: str) -> tuple[Digraph, ArcAnnotations]:
    """Read back the DOT subset written by :func:`to_dot`."""
    g = Digraph()
    notes = ArcAnnotations()
    for lineno, line in enumerate(text.splitlines(), 1):
        if lineno == 1 or line.strip() in ("}", ""):
            continue
        m = _DOT_EDGE.match(line)
        if m:
            u, v = _dot_unquote(m.group(1)), _dot_unquote(m.group(2))
            g.add_arc(g.add_vertex(u), g.add_vertex(v))
            if m.group(3):
                for tag in _dot_unquote(m.group(3)).split(","):
                    notes.add(u, v, tag)
            continue
        m = _DOT_NODE.match(line)
        if m:
            g.add_vertex(_dot_unquote(m.group(1)))
            continue
        raise ArcListFormatError(f"unrecognised DOT statement {line.strip()!r}", lineno)
    return g, notes
