"""Random digraph generators for tests, benchmarks and demos."""
from __future__ import annotations

import numpy as np

from .digraph import Digraph


def random_digraph(n: int, p: float, seed: int | np.random.Generator | None = None,
                   loops: bool = True) -> Digraph:
    """Each ordered pair ``(u, v)`` is an arc with probability ``p``."""
    rng = np.random.default_rng(seed)
    mask = rng.random((n, n)) < p
    if not loops:
        np.fill_diagonal(mask, False)
    us, vs = np.nonzero(mask)
    return Digraph.from_edges(n, zip(us.tolist(), vs.tolist()))


def dictionary_like(n: int, m: int, seed: int | None = None, zipf: float = 1.1) -> Digraph:
    """``n`` words, ``m`` distinct definitional arcs ``definer -> defined``.

    Defined words are drawn uniformly, defining words from a Zipf-like
    popularity law, so most words are used in no definition at all and a
    small core of frequent words defines nearly everything, as in real
    dictionaries.
    """
    if m > n * n:
        raise ValueError("too many arcs requested")
    rng = np.random.default_rng(seed)
    weights = 1.0 / np.arange(1, n + 1) ** zipf
    weights /= weights.sum()
    perm = rng.permutation(n)
    seen: set[int] = set()
    while len(seen) < m:
        k = int((m - len(seen)) * 1.1) + 16
        src = perm[rng.choice(n, size=k, p=weights)]
        dst = rng.integers(0, n, size=k)
        for code in (src.astype(np.int64) * n + dst).tolist():
            if len(seen) == m:
                break
            seen.add(code)
    g = Digraph.from_edges(n, ((c // n, c % n) for c in sorted(seen)))
    return g


def exact_size_graph(n: int, m: int, seed: int | None = None) -> Digraph:
    """Uniform loop-free digraph with exactly ``n`` vertices and ``m`` arcs."""
    rng = np.random.default_rng(seed)
    seen: set[int] = set()
    while len(seen) < m:
        codes = rng.integers(0, n * n, size=(m - len(seen)) * 2 + 16)
        for c in codes.tolist():
            if c // n != c % n:
                seen.add(c)
                if len(seen) == m:
                    break
    return Digraph.from_edges(n, ((c // n, c % n) for c in sorted(seen)))


def strongly_connected_graph(n: int, m: int, seed: int | None = None) -> Digraph:
    """Loop-free, strongly connected, exactly ``n`` vertices and ``m`` arcs.

    A random Hamiltonian circuit guarantees strong connectivity, so the
    graph is its own kernel; the remaining arcs are uniform.
    """
    if n == 1 and m == 0:
        return Digraph.from_edges(1, [])
    if not n <= m <= n * (n - 1) or n < 2:
        raise ValueError(f"need {max(n, 2)} <= m <= n(n-1) for a strongly connected loop-free digraph")
    rng = np.random.default_rng(seed)
    order = rng.permutation(n).tolist()
    seen = {order[i] * n + order[(i + 1) % n] for i in range(n)}
    while len(seen) < m:
        for c in rng.integers(0, n * n, size=(m - len(seen)) * 2 + 16).tolist():
            if c // n != c % n:
                seen.add(c)
                if len(seen) == m:
                    break
    return Digraph.from_edges(n, ((c // n, c % n) for c in sorted(seen)))
