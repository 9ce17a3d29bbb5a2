"""Reading and writing AMR graphs in PENMAN notation.

A block is optional ``# ::key value`` metadata lines followed by one
parenthesised graph::

    # ::id apple.0
    # ::snt apple is defined as a red round fruit
    (d / define-01
        :ARG1 (a / apple)
        :ARG2 (f / fruit
            :mod (r / red)
            :mod (r2 / round)))

Inverse roles (``:ARG0-of``) are normalised on read, so an :class:`AmrGraph`
only stores forward edges.  Attribute values (numbers, ``-``, quoted strings
and other bare symbols that are not variables) are kept verbatim.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator

# Roles that end in "-of" without being inverses.
NON_INVERTED_ROLES = frozenset({":consist-of", ":prep-out-of", ":prep-on-behalf-of"})
# Bare symbols of this shape are taken to be variables, never constants.
VARIABLE_RE = re.compile(r"^[a-z][0-9]*$")
MAX_DEPTH = 1000


class PenmanError(ValueError):
    """Malformed PENMAN input; ``line`` and ``column`` are 1-based."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.message = message
        self.line = line
        self.column = column


class PenmanSyntaxError(PenmanError):
    pass


class DuplicateInstanceError(PenmanError):
    pass


class DanglingVariableError(PenmanError):
    pass


class MultipleRootsError(PenmanError):
    pass


class NotRootedError(PenmanError):
    pass


class CycleError(PenmanError):
    pass


class MetadataError(PenmanError):
    pass


def is_inverted(role: str) -> bool:
    return role.endswith("-of") and role not in NON_INVERTED_ROLES and len(role) > 4


@dataclass(frozen=True, eq=False)
class AmrGraph:
    root: str
    instances: dict[str, str]
    edges: tuple[tuple[str, str, str], ...] = ()
    attributes: tuple[tuple[str, str, str], ...] = ()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AmrGraph):
            return NotImplemented
        return (self.root == other.root and self.instances == other.instances
                and set(self.edges) == set(other.edges) and set(self.attributes) == set(other.attributes))

    def __hash__(self) -> int:
        return hash((self.root, frozenset(self.instances.items()), frozenset(self.edges),
                     frozenset(self.attributes)))

    def concept(self, var: str) -> str:
        return self.instances[var]

    def out_edges(self, var: str) -> list[tuple[str, str, str]]:
        return [e for e in self.edges if e[0] == var]

    def role_targets(self, var: str, role: str) -> list[str]:
        return [t for s, r, t in self.edges if s == var and r == role]

    def reachable(self, var: str) -> list[str]:
        """Variables reachable from ``var`` (inclusive), in depth-first order."""
        children: dict[str, list[str]] = {}
        for s, _, t in self.edges:
            children.setdefault(s, []).append(t)
        seen = [var]
        marked = {var}
        todo = [var]
        while todo:
            x = todo.pop()
            for y in children.get(x, ()):
                if y not in marked:
                    marked.add(y)
                    seen.append(y)
                    todo.append(y)
        return seen


@dataclass(frozen=True)
class PenmanDocument:
    graph: AmrGraph
    metadata: dict[str, str] = field(default_factory=dict)

    @property
    def id(self) -> str | None:
        return self.metadata.get("id")

    @property
    def lexeme(self) -> str:
        return parse_id(self.metadata["id"])[0]

    @property
    def sense(self) -> int:
        return parse_id(self.metadata["id"])[1]


_ID_RE = re.compile(r"^(.+)\.(\d+)$")


def parse_id(value: str) -> tuple[str, int]:
    """``"apple.0"`` -> ``("apple", 0)``."""
    m = _ID_RE.match(value.strip())
    if not m:
        raise ValueError(f"id {value!r} is not of the form lexeme.N")
    return m.group(1), int(m.group(2))


# -- lexing ------------------------------------------------------------------------

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<lparen>\()
  | (?P<rparen>\))
  | (?P<slash>/)
  | (?P<string>"(?:[^"\\]|\\.)*")
  | (?P<role>:[^\s()"/]*)
  | (?P<symbol>[^\s()"/:][^\s()"/]*)
""", re.VERBOSE)


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str, line0: int) -> list[_Token]:
    tokens = []
    pos = 0
    line, line_start = line0, 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise PenmanSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(_Token(kind, m.group(), line, pos - line_start + 1))
        chunk = m.group()
        nl = chunk.count("\n")
        if nl:
            line += nl
            line_start = pos + chunk.rfind("\n") + 1
        pos = m.end()
    return tokens


_META_RE = re.compile(r"::(\S+)(?:[ \t]+(.*?))?(?=[ \t]+::\S|$)")


def _split_header(text: str) -> tuple[dict[str, str], str, int]:
    lines = text.split("\n")
    meta: dict[str, str] = {}
    i = 0
    while i < len(lines) and (not lines[i].strip() or lines[i].lstrip().startswith("#")):
        stripped = lines[i].strip()
        if stripped.startswith("#"):
            body = stripped.lstrip("#").strip()
            for m in _META_RE.finditer(body):
                meta[m.group(1)] = (m.group(2) or "").strip()
        i += 1
    return meta, "\n".join(lines[i:]), i + 1


# -- parsing -----------------------------------------------------------------------


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.i = 0
        self.instances: dict[str, str] = {}
        self.inst_pos: dict[str, _Token] = {}
        # (source, role, target token, is_node_target)
        self.relations: list[tuple[str, str, _Token, str | None]] = []

    def _peek(self) -> _Token | None:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def _next(self, expected: str) -> _Token:
        tok = self._peek()
        if tok is None:
            last = self.tokens[-1] if self.tokens else _Token("", "", 1, 0)
            raise PenmanSyntaxError(f"unexpected end of input, expected {expected}",
                                    last.line, last.col + len(last.text))
        self.i += 1
        return tok

    def _expect(self, kind: str, what: str) -> _Token:
        tok = self._next(what)
        if tok.kind != kind:
            raise PenmanSyntaxError(f"expected {what}, found {tok.text!r}", tok.line, tok.col)
        return tok

    def node(self) -> str:
        # Iterative descent: a stack of open nodes avoids recursion limits.
        self._expect("lparen", "'('")
        root = self._open_node()
        stack = [root]
        while stack:
            var = stack[-1]
            tok = self._next("role or ')'")
            if tok.kind == "rparen":
                stack.pop()
                continue
            if tok.kind != "role":
                raise PenmanSyntaxError(f"expected role or ')', found {tok.text!r}", tok.line, tok.col)
            if tok.text == ":":
                raise PenmanSyntaxError("empty role name", tok.line, tok.col)
            if is_inverted(tok.text) and is_inverted(tok.text[:-3]):
                raise PenmanSyntaxError(f"role {tok.text} is inverted twice", tok.line, tok.col)
            tgt = self._next("role target")
            if tgt.kind == "lparen":
                if len(stack) >= MAX_DEPTH:
                    raise PenmanSyntaxError("graph nested too deeply", tgt.line, tgt.col)
                child = self._open_node()
                self.relations.append((var, tok.text, self.inst_pos[child], child))
                stack.append(child)
            elif tgt.kind in ("symbol", "string"):
                self.relations.append((var, tok.text, tgt, None))
            else:
                raise PenmanSyntaxError(f"expected role target, found {tgt.text!r}", tgt.line, tgt.col)
        return root

    def _open_node(self) -> str:
        vtok = self._expect("symbol", "variable")
        var = vtok.text
        self._expect("slash", "'/'")
        ctok = self._next("concept")
        if ctok.kind not in ("symbol", "string"):
            raise PenmanSyntaxError(f"expected concept, found {ctok.text!r}", ctok.line, ctok.col)
        if var in self.instances:
            raise DuplicateInstanceError(f"variable {var!r} instantiated twice", vtok.line, vtok.col)
        self.instances[var] = ctok.text
        self.inst_pos[var] = vtok
        return var


def parse_penman(text: str, *, first_line: int = 1) -> PenmanDocument:
    """Parse one PENMAN block (metadata lines plus a single graph)."""
    meta, body, body_line = _split_header(text)
    if "id" in meta:
        try:
            parse_id(meta["id"])
        except ValueError as exc:
            raise MetadataError(str(exc), first_line, 1) from None
    tokens = _tokenize(body, first_line + body_line - 1)
    if not tokens:
        raise PenmanSyntaxError("no graph found", first_line, 1)
    p = _Parser(tokens)
    root = p.node()
    rest = p._peek()
    if rest is not None:
        if rest.kind == "lparen":
            raise MultipleRootsError("more than one top-level graph in block", rest.line, rest.col)
        raise PenmanSyntaxError(f"unexpected {rest.text!r} after graph", rest.line, rest.col)

    edges: list[tuple[str, str, str]] = []
    attrs: list[tuple[str, str, str]] = []
    edge_pos: dict[tuple[str, str, str], _Token] = {}
    for src, role, tok, child in p.relations:
        if child is None and tok.kind == "symbol" and tok.text in p.instances:
            child = tok.text
        if child is None:
            if tok.kind == "symbol" and VARIABLE_RE.match(tok.text):
                raise DanglingVariableError(f"variable {tok.text!r} is never instantiated", tok.line, tok.col)
            if is_inverted(role):
                raise PenmanSyntaxError(f"inverted role {role} needs a variable target", tok.line, tok.col)
            a = (src, role, tok.text)
            if a not in attrs:
                attrs.append(a)
            continue
        e = (child, role[:-3], src) if is_inverted(role) else (src, role, child)
        if e not in edge_pos:
            edges.append(e)
            edge_pos[e] = tok

    graph = AmrGraph(root, dict(p.instances), tuple(edges), tuple(attrs))
    reach = set(graph.reachable(root))
    for var in p.instances:
        if var not in reach:
            t = p.inst_pos[var]
            raise NotRootedError(f"variable {var!r} is not reachable from root {root!r}", t.line, t.col)
    cyc = _find_cycle_edge(graph)
    if cyc is not None:
        t = edge_pos[cyc]
        raise CycleError(f"edge {cyc[0]} {cyc[1]} {cyc[2]} closes a cycle", t.line, t.col)
    return PenmanDocument(graph, meta)


def _find_cycle_edge(graph: AmrGraph) -> tuple[str, str, str] | None:
    out: dict[str, list[tuple[str, str, str]]] = {}
    for e in graph.edges:
        out.setdefault(e[0], []).append(e)
    state: dict[str, int] = {}
    for start in graph.instances:
        if start in state:
            continue
        state[start] = 1
        work = [(start, iter(out.get(start, ())))]
        while work:
            v, it = work[-1]
            for e in it:
                w = e[2]
                st = state.get(w)
                if st == 1:
                    return e
                if st is None:
                    state[w] = 1
                    work.append((w, iter(out.get(w, ()))))
                    break
            else:
                state[v] = 2
                work.pop()
    return None


# -- serialisation -------------------------------------------------------------------


def serialize_graph(graph: AmrGraph, indent: int = 4) -> str:
    out_edges: dict[str, list[tuple[str, str]]] = {}
    for s, r, t in graph.edges:
        out_edges.setdefault(s, []).append((r, t))
    out_attrs: dict[str, list[tuple[str, str]]] = {}
    for s, r, c in graph.attributes:
        out_attrs.setdefault(s, []).append((r, c))

    visited = {graph.root}
    parts: list[str] = []

    def emit(var: str, depth: int) -> None:
        parts.append(f"({var} / {graph.instances[var]}")
        pad = "\n" + " " * (indent * (depth + 1))
        for role, tgt in out_edges.get(var, ()):
            parts.append(f"{pad}{role} ")
            if tgt in visited:
                parts.append(tgt)
            else:
                visited.add(tgt)
                emit(tgt, depth + 1)
        for role, const in out_attrs.get(var, ()):
            parts.append(f"{pad}{role} {const}")
        parts.append(")")

    emit(graph.root, 0)
    return "".join(parts)


def serialize_penman(doc: PenmanDocument) -> str:
    lines = [f"# ::{k} {v}".rstrip() for k, v in doc.metadata.items()]
    lines.append(serialize_graph(doc.graph))
    return "\n".join(lines) + "\n"


# -- corpora ---------------------------------------------------------------------------


def iter_blocks(text: str) -> Iterator[tuple[int, str]]:
    """Yield ``(first_line, block_text)`` for blank-line separated blocks."""
    block: list[str] = []
    start = 1
    for i, line in enumerate(text.split("\n"), 1):
        if line.strip():
            if not block:
                start = i
            block.append(line)
        elif block:
            yield start, "\n".join(block)
            block = []
    if block:
        yield start, "\n".join(block)


def loads_corpus(text: str) -> list[PenmanDocument]:
    return [parse_penman(b, first_line=ln) for ln, b in iter_blocks(text)]


def read_corpus(path: str | Path) -> list[PenmanDocument]:
    return loads_corpus(Path(path).read_text(encoding="utf-8"))


def dumps_corpus(docs: list[PenmanDocument]) -> str:
    return "\n".join(serialize_penman(d) for d in docs)
