"""MFVS-preserving digraph reductions and the priority scheduler.

Six pointed reductions are provided::

    Loop(G, u)         G - u, u joins the partial solution   if (u, u) in A
    Subset(G, u, v)    G - u, u joins the partial solution   if s(G, u, v)
    InClique(G, u)     G o u                                  if N-(u) is a diclique, no loop at u
    OutClique(G, u)    G o u                                  if N+(u) is a diclique, no loop at u
    Pie(G, u, v)       G - (u, v)                             if (u, v) is acyclic in G - A<->
    Dome++(G, u, v)    G - (u, v)                             if every vu-path of G - A<-> has an
                                                              interior vertex in N-(v) or N+(u)

:func:`reduce` runs a set of reductions to a fixed point, honouring a priority
map (smaller value first).  With :data:`CONFLUENT` and :data:`RHO_C` the
visiting order only matters up to isomorphism: contraction may keep a
different one of several interchangeable vertices, so labels and the partial
solution can change while its size and the shape of the result do not.
:func:`reduce_reference` is a literal, slow rendering of the same nested
fixed-point loop that accepts a random visiting order.
"""
from __future__ import annotations

import enum
import heapq
import random
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

from .digraph import Arc, Digraph, GraphError, UnknownArcError, UnknownVertexError, component_map


class ReductionKind(str, enum.Enum):
    LOOP = "loop"
    SUBSET = "subset"
    IN_CLIQUE = "in_clique"
    OUT_CLIQUE = "out_clique"
    PIE = "pie"
    DOME = "dome"

    @property
    def is_vertex_rule(self) -> bool:
        return self in (ReductionKind.LOOP, ReductionKind.IN_CLIQUE, ReductionKind.OUT_CLIQUE)

    @property
    def is_arc_rule(self) -> bool:
        return self in (ReductionKind.PIE, ReductionKind.DOME)


LOOP, SUBSET, IN_CLIQUE, OUT_CLIQUE, PIE, DOME = ReductionKind
KIND_ORDER = (LOOP, SUBSET, IN_CLIQUE, OUT_CLIQUE, PIE, DOME)
LOCAL_KINDS = frozenset({LOOP, SUBSET, IN_CLIQUE, OUT_CLIQUE})

CONFLUENT = frozenset({LOOP, SUBSET, IN_CLIQUE, OUT_CLIQUE, PIE})
NONCONFLUENT = CONFLUENT | {DOME}
RHO_C: Mapping[ReductionKind, int] = {LOOP: 1, SUBSET: 1, IN_CLIQUE: 1, OUT_CLIQUE: 1, PIE: 2}
RHO_NC: Mapping[ReductionKind, int] = {**RHO_C, DOME: 3}

ISOLATED = "isolated"


class BidirectionalArcError(GraphError, ValueError):
    def __str__(self) -> str:
        return f"arc {self.args[0]!r} is bidirectional; Pie and Dome++ do not apply to it"


# -- predicates ----------------------------------------------------------------


def pred_loop(g: Digraph, u: int) -> bool:
    return g.has_loop(u)


def _is_clique(g: Digraph, vs: set[int]) -> bool:
    succ = g._succ
    k = len(vs) - 1
    for x in vs:
        sx = succ[x]
        if len(sx) < k or x in sx:
            return False
    for x in vs:
        sx = succ[x]
        for y in vs:
            if y != x and y not in sx:
                return False
    return True


def pred_in(g: Digraph, u: int) -> bool:
    return not g.has_loop(u) and _is_clique(g, g._pred[u])


def pred_out(g: Digraph, u: int) -> bool:
    return not g.has_loop(u) and _is_clique(g, g._succ[u])


def pred_subset(g: Digraph, u: int, v: int) -> bool:
    """``s(G, u, v)``; neighbourhoods are compared with ``u`` and ``v`` left out."""
    if u == v:
        raise ValueError("Subset needs two distinct vertices")
    succ, pred = g._succ, g._pred
    if u not in succ:
        raise UnknownVertexError(u)
    if v not in succ:
        raise UnknownVertexError(v)
    sv = succ[v]
    if v in sv or v not in succ[u] or u not in sv:
        return False
    pv, pu, su = pred[v], pred[u], succ[u]
    if len(pv) - 1 > len(pu) or len(sv) - 1 > len(su):
        return False
    for x in pv:
        if x != u and x not in pu:
            return False
    for x in sv:
        if x != u and x not in su:
            return False
    return True


def _check_arc(g: Digraph, arc: Arc) -> tuple[int, int]:
    u, v = arc
    if not g.has_arc(u, v):
        raise UnknownArcError(arc)
    if g.has_arc(v, u):
        raise BidirectionalArcError(arc)
    return u, v


def _reaches_skipping_bidirectional(g: Digraph, source: int, target: int,
                                    dome: tuple[int, int] | None = None) -> bool:
    """Is there a ``source``-``target`` path in ``G - A<->``?

    With ``dome = (u, v)`` interior vertices of ``N-(v) | N+(u)`` (taken in
    ``G - A<->``) may not be used.
    """
    # Search from both ends, always growing the smaller frontier.  In the
    # common case a path exists and the two balls meet long before either
    # covers the graph.
    succ, pred = g._succ, g._pred
    if dome is None:
        blocked = None
    else:
        u, v = dome
        pv, sv, su = pred[v], succ[v], succ[u]

        def blocked(y: int) -> bool:
            return (y in pv and y not in sv) or (y in su and u not in succ[y])

    fwd, bwd = {source}, {target}
    f_front, b_front = [source], [target]
    while f_front and b_front:
        if len(f_front) <= len(b_front):
            nxt = []
            for x in f_front:
                for y in succ[x]:
                    if x in succ[y] or y in fwd:
                        continue
                    if y in bwd:
                        return True
                    if blocked is not None and blocked(y):
                        continue
                    fwd.add(y)
                    nxt.append(y)
            f_front = nxt
        else:
            nxt = []
            for y in b_front:
                for x in pred[y]:
                    if x in succ[y] or x in bwd:
                        continue
                    if x in fwd:
                        return True
                    if blocked is not None and blocked(x):
                        continue
                    bwd.add(x)
                    nxt.append(x)
            b_front = nxt
    return False


def pred_pie(g: Digraph, arc: Arc) -> bool:
    """``(u, v)`` lies on no circuit of ``G - A<->``."""
    u, v = _check_arc(g, arc)
    return not _reaches_skipping_bidirectional(g, v, u)


def pred_dome(g: Digraph, arc: Arc) -> bool:
    """Every vu-path of ``G - A<->`` has an interior vertex in ``N-(v) | N+(u)`` there."""
    u, v = _check_arc(g, arc)
    return not _reaches_skipping_bidirectional(g, v, u, (u, v))


def holds(kind: ReductionKind, g: Digraph, target) -> bool:
    if kind is LOOP:
        return pred_loop(g, target)
    if kind is IN_CLIQUE:
        return pred_in(g, target)
    if kind is OUT_CLIQUE:
        return pred_out(g, target)
    if kind is SUBSET:
        return pred_subset(g, *target)
    if kind is PIE:
        return pred_pie(g, target)
    if kind is DOME:
        return pred_dome(g, target)
    raise ValueError(kind)


def targets(kind: ReductionKind, g: Digraph) -> list:
    """Every well-formed target of ``kind`` in ascending order."""
    succ = g._succ
    if kind.is_vertex_rule:
        return g.vertices()
    if kind is SUBSET:
        return [(u, v) for u in sorted(succ) for v in sorted(succ[u]) if v != u and u in succ[v]]
    return [(u, v) for u, v in g.arcs() if u not in succ[v]]


# -- single applications --------------------------------------------------------------


@dataclass
class TraceDelta:
    kind: ReductionKind | None = None
    target: object = None
    included: frozenset[int] = frozenset()
    excluded: frozenset[int] = frozenset()
    removed_arcs: tuple[Arc, ...] = ()

    @property
    def applied(self) -> bool:
        return self.kind is not None


def _apply_in_place(kind: ReductionKind, g: Digraph, target) -> TraceDelta:
    if not holds(kind, g, target):
        return TraceDelta()
    if kind is LOOP:
        g.discard_vertex(target)
        return TraceDelta(kind, target, included=frozenset({target}))
    if kind is SUBSET:
        u = target[0]
        g.discard_vertex(u)
        return TraceDelta(kind, target, included=frozenset({u}))
    if kind in (IN_CLIQUE, OUT_CLIQUE):
        g.contract_vertex(target)
        return TraceDelta(kind, target, excluded=frozenset({target}))
    g.discard_arc(*target)
    return TraceDelta(kind, target, removed_arcs=(tuple(target),))


def apply(kind: ReductionKind, g: Digraph, target) -> tuple[Digraph, TraceDelta]:
    """Pointed reduction; ``g`` is returned unchanged when the predicate fails."""
    h = g.copy()
    delta = _apply_in_place(kind, h, target)
    return (h, delta) if delta.applied else (g, delta)


@dataclass
class SweepResult:
    included: set[int] = field(default_factory=set)
    excluded: set[int] = field(default_factory=set)
    removed_arcs: list[Arc] = field(default_factory=list)
    applications: int = 0


def _sweep_in_place(kind: ReductionKind, g: Digraph, rng: random.Random | None = None,
                    acc: SweepResult | None = None) -> SweepResult:
    acc = acc if acc is not None else SweepResult()
    succ = g._succ
    while True:
        changed = False
        todo = targets(kind, g)
        if rng is not None:
            rng.shuffle(todo)
        for t in todo:
            if kind.is_vertex_rule:
                if t not in succ:
                    continue
            elif kind is SUBSET:
                if t[0] not in succ or t[1] not in succ:
                    continue
            elif not g.has_arc(*t) or g.has_arc(t[1], t[0]):
                continue
            delta = _apply_in_place(kind, g, t)
            if delta.applied:
                changed = True
                acc.applications += 1
                acc.included |= delta.included
                acc.excluded |= delta.excluded
                acc.removed_arcs.extend(delta.removed_arcs)
        if not changed:
            return acc


def sweep(kind: ReductionKind, g: Digraph, rng: random.Random | None = None) -> tuple[Digraph, SweepResult]:
    """Non-pointed reduction: visit every target, repeating passes until one changes nothing.

    Targets are visited in ascending order, or shuffled by ``rng``.
    """
    h = g.copy()
    res = _sweep_in_place(kind, h, rng)
    return h, res


# -- traces -----------------------------------------------------------------------------


@dataclass
class ReductionTrace:
    initial_vertices: int
    initial_arcs: int
    included: set[int] = field(default_factory=set)
    counts: dict[ReductionKind, int] = field(default_factory=lambda: {k: 0 for k in KIND_ORDER})
    isolated: int = 0
    remaining_vertices: int = 0
    remaining_arcs: int = 0
    log: list[tuple[object, object]] = field(default_factory=list)

    @property
    def excluded(self) -> int:
        return self.initial_vertices - self.remaining_vertices - len(self.included)

    @property
    def reductions_total(self) -> int:
        return sum(self.counts.values())

    def to_dict(self, g: Digraph | None = None, with_log: bool = False) -> dict:
        """JSON-ready summary; ``g`` (any graph sharing the label table) names log targets."""
        out = {
            "remaining_vertices": self.remaining_vertices,
            "included": len(self.included),
            "excluded": self.excluded,
            "reductions_total": self.reductions_total,
            **{k.value: self.counts[k] for k in KIND_ORDER},
            "isolated": self.isolated,
        }
        if with_log:
            name = (lambda u: g.label(u)) if g is not None else (lambda u: u)
            entries = []
            for kind, t in self.log:
                tgt = [name(x) for x in t] if isinstance(t, tuple) else name(t)
                entries.append({"kind": kind.value if isinstance(kind, ReductionKind) else kind, "target": tgt})
            out["log"] = entries
        return out


# -- scheduler -------------------------------------------------------------------------------


class _Engine:
    """Worklist implementation of the nested priority fixed point.

    Local rules (Loop, Subset, InClique, OutClique) are driven by a heap of
    vertices whose neighbourhood changed since they were last examined.  Arc
    rules are evaluated by scanning; after each arc removal the lower
    priority levels are consulted before the scan continues, so no rule
    fires while a rule of higher priority is applicable.
    """

    def __init__(self, g: Digraph, kinds: Iterable[ReductionKind], rho: Mapping[ReductionKind, int],
                 record_log: bool):
        self.g = g
        kinds = [k for k in KIND_ORDER if k in set(kinds)]
        missing = [k for k in kinds if k not in rho]
        if missing:
            raise ValueError(f"priority missing for {missing}")
        if any(rho[k] <= 0 for k in kinds):
            raise ValueError("priorities must be positive integers")
        self.levels = sorted({rho[k] for k in kinds})
        self.local = {L: [k for k in kinds if rho[k] == L and k in LOCAL_KINDS] for L in self.levels}
        self.arc_kinds = {L: [k for k in kinds if rho[k] == L and k.is_arc_rule] for L in self.levels}
        self.dirty = {L: set(g._succ) for L in self.levels if self.local[L]}
        self.heaps = {L: sorted(s) for L, s in self.dirty.items()}
        self.version = 0
        self.exhausted: dict[ReductionKind, int] = {}
        self.dome_cursor: Arc | None = None
        self.trace = ReductionTrace(g.num_vertices, g.num_arcs)
        self.record_log = record_log

    # bookkeeping

    def _touch(self, vs: Iterable[int]) -> None:
        alive = self.g._succ
        for L, d in self.dirty.items():
            h = self.heaps[L]
            for v in vs:
                if v in alive and v not in d:
                    d.add(v)
                    heapq.heappush(h, v)

    def _record(self, kind, target) -> None:
        self.version += 1
        if isinstance(kind, ReductionKind):
            self.trace.counts[kind] += 1
        if self.record_log:
            self.trace.log.append((kind, target))

    def _remove_vertex(self, u: int) -> None:
        g = self.g
        nbrs = (g._succ[u] | g._pred[u]) - {u}
        g.discard_vertex(u)
        self._touch(nbrs)

    def _contract(self, u: int) -> None:
        g = self.g
        succ, pred = g._succ, g._pred
        nbrs = (succ[u] | pred[u]) - {u}
        added = g.contract_vertex(u)
        touched = set(nbrs)
        for p, s in added:
            if p != s and p in succ[s]:
                # a new 2-cycle p<->s may complete a diclique around a common neighbour
                a, b = (succ[p], succ[s]) if len(succ[p]) <= len(succ[s]) else (succ[s], succ[p])
                touched.update(x for x in a if x in b)
                a, b = (pred[p], pred[s]) if len(pred[p]) <= len(pred[s]) else (pred[s], pred[p])
                touched.update(x for x in a if x in b)
        self._touch(touched)

    def _remove_arc(self, kind: ReductionKind, u: int, v: int) -> None:
        g = self.g
        g.discard_arc(u, v)
        self._record(kind, (u, v))
        for x in (u, v):
            if x in g._succ and not g._succ[x] and not g._pred[x]:
                g.discard_vertex(x)
                self.trace.isolated += 1
                self._record(ISOLATED, x)
        self._touch((u, v))

    # local rules

    def _local_match(self, L: int, w: int):
        g = self.g
        succ, pred = g._succ, g._pred
        for kind in self.local[L]:
            if kind is LOOP:
                if w in succ[w]:
                    return kind, w
            elif kind is SUBSET:
                best = None
                sw, pw = succ[w], pred[w]
                small, big = (sw, pw) if len(sw) <= len(pw) else (pw, sw)
                for y in small:
                    if y == w or y not in big:
                        continue
                    for pair in ((w, y), (y, w)):
                        if (best is None or pair < best) and pred_subset(g, *pair):
                            best = pair
                if best is not None:
                    return kind, best
            elif kind is IN_CLIQUE:
                if w not in succ[w] and _is_clique(g, pred[w]):
                    return kind, w
            elif kind is OUT_CLIQUE:
                if w not in succ[w] and _is_clique(g, succ[w]):
                    return kind, w
        return None

    def _step_local(self, L: int) -> bool:
        d = self.dirty.get(L)
        if not d:
            return False
        h = self.heaps[L]
        alive = self.g._succ
        while h:
            w = heapq.heappop(h)
            d.discard(w)
            if w not in alive:
                continue
            m = self._local_match(L, w)
            if m is None:
                continue
            kind, t = m
            if kind is LOOP or kind is SUBSET:
                u = t if kind is LOOP else t[0]
                self.trace.included.add(u)
                self._remove_vertex(u)
            else:
                self._contract(t)
            self._record(kind, t)
            # w may still match another rule (e.g. Subset with a second partner)
            self._touch((w,))
            return True
        return False

    # arc rules

    def _lower_fires(self, L: int) -> bool:
        """Apply one application below level ``L`` if any is possible."""
        for M in self.levels:
            if M >= L:
                break
            if self._step_local(M):
                return True
            for kind in self.arc_kinds[M]:
                if self.exhausted.get(kind) != self.version:
                    if self._step_arcs(kind, M):
                        return True
        return False

    def _step_pie(self, L: int) -> bool:
        g = self.g
        succ = g._succ
        comp = component_map(g, skip_bidirectional=True)
        cands = [(u, v) for u in sorted(succ) for v in sorted(succ[u])
                 if comp[u] != comp[v] and u not in succ[v]]
        if not cands:
            self.exhausted[PIE] = self.version
            return False
        for u, v in cands:
            # Removing an arc between components of G - A<-> leaves those
            # components and A<-> intact, so the remaining candidates stay valid.
            self._remove_arc(PIE, u, v)
            if self._lower_fires(L):
                return True
        self.exhausted[PIE] = self.version
        return True

    def _step_dome(self, L: int) -> bool:
        g = self.g
        succ = g._succ
        arcs = [(u, v) for u in sorted(succ) for v in sorted(succ[u]) if u not in succ[v]]
        if self.dome_cursor is not None:
            cut = next((i for i, a in enumerate(arcs) if a > self.dome_cursor), len(arcs))
            arcs = arcs[cut:] + arcs[:cut]
        pie_level = PIE in self.arc_kinds.get(L, ()) or any(PIE in self.arc_kinds[M] for M in self.levels if M < L)
        applied = False
        for u, v in arcs:
            if not g.has_arc(u, v) or g.has_arc(v, u):
                continue
            if _reaches_skipping_bidirectional(g, v, u, (u, v)):
                continue
            pie_done = self.exhausted.get(PIE) == self.version
            self._remove_arc(DOME, u, v)
            self.dome_cursor = (u, v)
            applied = True
            if pie_level:
                if not (u in succ and v in succ and _reaches_skipping_bidirectional(g, u, v)):
                    # the component of u and v split: Pie may fire
                    return True
                if pie_done:
                    # components of G - A<-> and A<-> itself are unchanged
                    self.exhausted[PIE] = self.version
            if self._lower_fires(L):
                return True
        if not applied:
            self.exhausted[DOME] = self.version
        return applied

    def _step_arcs(self, kind: ReductionKind, L: int) -> bool:
        if kind is PIE:
            return self._step_pie(L)
        return self._step_dome(L)

    def run(self) -> ReductionTrace:
        while True:
            for L in self.levels:
                if self._step_local(L):
                    break
                if any(self.exhausted.get(k) != self.version and self._step_arcs(k, L)
                       for k in self.arc_kinds[L]):
                    break
            else:
                break
        self.trace.remaining_vertices = self.g.num_vertices
        self.trace.remaining_arcs = self.g.num_arcs
        return self.trace


def reduce(g: Digraph, kinds: Iterable[ReductionKind] = CONFLUENT,
           rho: Mapping[ReductionKind, int] = RHO_C, *, log: bool = False) -> tuple[Digraph, ReductionTrace]:
    """Reduce ``g`` until no rule in ``kinds`` applies.

    Returns the irreducible graph (a copy; ``g`` is untouched) and the trace.
    Vertices left without arcs by Pie or Dome++ are dropped immediately and
    counted in ``trace.isolated`` rather than as InClique/OutClique.
    """
    h = g.copy()
    trace = _Engine(h, kinds, rho, log).run()
    return h, trace


def reduce_confluent(g: Digraph, *, log: bool = False) -> tuple[Digraph, ReductionTrace]:
    return reduce(g, CONFLUENT, RHO_C, log=log)


def reduce_nonconfluent(g: Digraph, *, log: bool = False) -> tuple[Digraph, ReductionTrace]:
    return reduce(g, NONCONFLUENT, RHO_NC, log=log)


def reduce_reference(g: Digraph, kinds: Iterable[ReductionKind] = CONFLUENT,
                     rho: Mapping[ReductionKind, int] = RHO_C,
                     rng: random.Random | None = None) -> tuple[Digraph, set[int]]:
    """Literal nested fixed point with whole-graph sweeps.

    At level ``p``: reduce at level ``p - 1``, then sweep each rule of
    priority ``p``; repeat until a round changes nothing.  With ``rng`` the
    rules of a level and the targets of every sweep are visited in random
    order.  Returns the irreducible graph and the partial solution.
    """
    kinds = [k for k in KIND_ORDER if k in set(kinds)]
    h = g.copy()
    acc = SweepResult()

    def run(p: int) -> None:
        if p <= 0:
            return
        level = [k for k in kinds if rho[k] == p]
        while True:
            before = (h.num_vertices, h.num_arcs)
            run(p - 1)
            mid = (h.num_vertices, h.num_arcs)
            order = list(level)
            if rng is not None:
                rng.shuffle(order)
            for kind in order:
                _sweep_in_place(kind, h, rng, acc)
            if (h.num_vertices, h.num_arcs) == before == mid:
                return

    run(max((rho[k] for k in kinds), default=0))
    return h, acc.included


def applicable(g: Digraph, kinds: Iterable[ReductionKind]) -> Iterator[tuple[ReductionKind, object]]:
    """Every (kind, target) whose predicate currently holds, by brute force."""
    for kind in KIND_ORDER:
        if kind in set(kinds):
            for t in targets(kind, g):
                if holds(kind, g, t):
                    yield kind, t


def replay(g: Digraph, log: Sequence[tuple[object, object]]) -> Iterator[tuple[Digraph, object, object]]:
    """Re-apply an application log step by step, yielding the graph before each step."""
    h = g.copy()
    for kind, t in log:
        yield h, kind, t
        if kind == ISOLATED:
            h.discard_vertex(t)
            continue
        if not _apply_in_place(kind, h, t).applied:
            raise AssertionError(f"log entry {kind}:{t} does not apply on replay")


def partial_solution_labels(g: Digraph, trace: ReductionTrace) -> list[str]:
    return sorted(g.label(u) for u in trace.included)


__all__ = [
    "BidirectionalArcError", "CONFLUENT", "DOME", "IN_CLIQUE", "ISOLATED", "KIND_ORDER", "LOOP",
    "NONCONFLUENT", "OUT_CLIQUE", "PIE", "RHO_C", "RHO_NC", "ReductionKind", "ReductionTrace", "SUBSET",
    "SweepResult", "TraceDelta", "applicable", "apply", "holds", "partial_solution_labels", "pred_dome",
    "pred_in", "pred_loop", "pred_out", "pred_pie", "pred_subset", "reduce", "reduce_confluent",
    "reduce_nonconfluent", "reduce_reference", "replay", "sweep", "targets",
]
