"""Exact minimum feedback vertex sets by exhaustive search.

Only meant for desk-scale graphs (default cap: 20 vertices).  Used to check
that reductions preserve the MFVS.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Iterable

from .digraph import Digraph, UnknownVertexError

DEFAULT_CAP = 20


class CapExceededError(ValueError):
    pass


@dataclass(frozen=True)
class FvsResult:
    size: int
    witnesses: tuple[frozenset[int], ...]

    @property
    def witness(self) -> frozenset[int]:
        return self.witnesses[0]


def _masks(g: Digraph) -> tuple[list[int], list[int], list[int]]:
    order = g.vertices()
    pos = {u: i for i, u in enumerate(order)}
    succ = [0] * len(order)
    pred = [0] * len(order)
    for u, v in g.arcs():
        succ[pos[u]] |= 1 << pos[v]
        pred[pos[v]] |= 1 << pos[u]
    return order, succ, pred


def _acyclic(alive: int, pred: list[int]) -> bool:
    # Peel vertices without predecessors until nothing moves.
    changed = True
    while alive and changed:
        changed = False
        rest = alive
        while rest:
            low = rest & -rest
            i = low.bit_length() - 1
            rest ^= low
            if not pred[i] & alive:
                alive ^= low
                changed = True
    return not alive


def is_acyclic(g: Digraph) -> bool:
    order, _, pred = _masks(g)
    return _acyclic((1 << len(order)) - 1, pred)


def is_fvs(g: Digraph, vertices: Iterable[int]) -> bool:
    """True iff ``G - U`` has no circuit; self-loops count as circuits."""
    removed = set(vertices)
    for u in removed:
        if u not in g:
            raise UnknownVertexError(u)
    order, _, pred = _masks(g)
    alive = 0
    for i, u in enumerate(order):
        if u not in removed:
            alive |= 1 << i
    return _acyclic(alive, pred)


def exact_mfvs(g: Digraph, cap: int = DEFAULT_CAP, all_witnesses: bool = True) -> FvsResult:
    """Minimum FVS by enumeration in order of cardinality, then lexicographically.

    Self-loop vertices are forced into every candidate.  With
    ``all_witnesses=False`` only the lexicographically first MFVS is kept.
    """
    n = g.num_vertices
    if n > cap:
        raise CapExceededError(f"graph has {n} vertices, oracle cap is {cap}")
    order, succ, pred = _masks(g)
    full = (1 << n) - 1
    forced = [i for i in range(n) if succ[i] >> i & 1]
    forced_mask = sum(1 << i for i in forced)
    free = [i for i in range(n) if not forced_mask >> i & 1]
    for k in range(len(free) + 1):
        found = []
        for combo in combinations(free, k):
            mask = forced_mask
            for i in combo:
                mask |= 1 << i
            if _acyclic(full & ~mask, pred):
                found.append(frozenset(order[i] for i in sorted(forced + list(combo))))
                if not all_witnesses:
                    break
        if found:
            return FvsResult(len(forced) + k, tuple(found))
    raise AssertionError("unreachable: removing every vertex leaves an acyclic graph")


def mfvs_size(g: Digraph, cap: int = DEFAULT_CAP) -> int:
    return exact_mfvs(g, cap, all_witnesses=False).size


ApplyFn = Callable[[Digraph, object], tuple[Digraph, Iterable[int]]]


def check_preservation(g: Digraph, kind, target, *, apply_fn: ApplyFn | None = None,
                       cap: int = DEFAULT_CAP) -> bool:
    """Apply one reduction and confirm the MFVS identity on both sides.

    ``mfvs(G) == |U| + mfvs(G')`` must hold, and every minimum FVS ``U'`` of
    ``G'`` lifted by the partial solution ``U`` must be an FVS of ``G``.
    ``apply_fn(g, target) -> (g', U)`` substitutes a custom rule, e.g. a
    deliberately broken one.
    """
    if apply_fn is None:
        from .reductions import apply

        def apply_fn(h, t):
            h2, delta = apply(kind, h, t)
            return h2, delta.included

    reduced, included = apply_fn(g, target)
    included = set(included)
    before = exact_mfvs(g, cap, all_witnesses=False)
    after = exact_mfvs(reduced, cap)
    if before.size != len(included) + after.size:
        return False
    return all(is_fvs(g, w | included) for w in after.witnesses)
