"""Exhaustive reference implementations.

Deliberately slow and simple.  Nothing here touches the engine's orders,
communities or search: each function rebuilds a plain set-of-neighbours
adjacency from the graph's CSR arrays and works on that.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Sequence

from .graph import Graph

MAX_BRUTE_FORCE_N = 30


class OracleRefusal(ValueError):
    """The instance is too large for exhaustive enumeration."""


def _adjacency(g: Graph) -> list[set[int]]:
    off = g.offsets.tolist()
    nb = g.neighbors.tolist()
    return [set(nb[off[u]:off[u + 1]]) for u in range(g.n)]


def brute_force_cliques(g: Graph, k: int) -> list[tuple[int, ...]]:
    """All k-cliques by testing every k-subset; sorted, in input ids."""
    if g.n > MAX_BRUTE_FORCE_N:
        raise OracleRefusal(f"brute force refuses n={g.n} > {MAX_BRUTE_FORCE_N}")
    if k < 1:
        raise ValueError("k must be >= 1")
    adj = _adjacency(g)
    ids = g.ids.tolist()
    found = []
    for subset in combinations(range(g.n), k):
        if all(b in adj[a] for a, b in combinations(subset, 2)):
            found.append(tuple(sorted(ids[v] for v in subset)))
    return sorted(found)


def clique_counts_by_size(g: Graph) -> dict[int, int]:
    """Number of cliques of every size >= 1, by exhaustive growth.

    Every clique is reached once, as an increasing vertex sequence whose
    each new vertex is adjacent to all previous ones.  Used where the
    k-subset scan is too slow (all k at n = 24).
    """
    if g.n > MAX_BRUTE_FORCE_N:
        raise OracleRefusal(f"clique enumeration refuses n={g.n} > {MAX_BRUTE_FORCE_N}")
    adj = _adjacency(g)
    counts: dict[int, int] = {}

    def grow(size: int, candidates: list[int]) -> None:
        for i, v in enumerate(candidates):
            counts[size + 1] = counts.get(size + 1, 0) + 1
            grow(size + 1, [w for w in candidates[i + 1:] if w in adj[v]])

    grow(0, list(range(g.n)))
    return counts


def exact_degeneracy(g: Graph) -> int:
    """Peel a minimum-degree vertex, recomputing every degree from scratch each step."""
    adj = _adjacency(g)
    alive = set(range(g.n))
    s = 0
    while alive:
        degrees = {v: sum(1 for w in adj[v] if w in alive) for v in alive}
        v = min(alive, key=lambda x: (degrees[x], x))
        s = max(s, degrees[v])
        alive.remove(v)
    return s


def definitional_degeneracy(g: Graph) -> int:
    """max over all vertex subsets of the induced minimum degree (n <= 14)."""
    if g.n > 14:
        raise OracleRefusal("definitional degeneracy is exponential; n <= 14 only")
    adj = _adjacency(g)
    best = 0
    for r in range(1, g.n + 1):
        for subset in combinations(range(g.n), r):
            sub = set(subset)
            best = max(best, min(len(adj[v] & sub) for v in subset))
    return best


def exact_community_degeneracy(g: Graph) -> int:
    """Peel an edge in the fewest remaining triangles, recounting all triangles each step."""
    adj = _adjacency(g)
    edges = {(u, v) for u in range(g.n) for v in adj[u] if u < v}
    sigma = 0
    while edges:
        def triangles(e):
            u, v = e
            return sum(1 for w in adj[u] & adj[v])

        e = min(edges, key=lambda x: (triangles(x), x))
        sigma = max(sigma, triangles(e))
        edges.remove(e)
        u, v = e
        adj[u].discard(v)
        adj[v].discard(u)
    return sigma


def brute_force_triangles(g: Graph) -> int:
    adj = _adjacency(g)
    return sum(
        1
        for a, b, c in combinations(range(g.n), 3)
        if b in adj[a] and c in adj[a] and c in adj[b]
    )


def brute_force_relevant_pairs(I: Sequence[int], c: int) -> int:
    """Count pairs of ``I`` (taken in the given order) with at least ``c`` members between them."""
    if len(I) > 10_000:
        raise OracleRefusal("relevant-pair scan limited to 10^4 vertices")
    position = {v: i for i, v in enumerate(I)}
    total = 0
    for u in I:
        for v in I:
            if position[v] - position[u] - 1 >= c:
                total += 1
    return total


def relevant_pair_formula(size: int, c: int) -> int:
    return comb(size - c, 2) if size > c + 1 else 0


@dataclass
class OracleReport:
    clique_counts: dict[int, int] = field(default_factory=dict)
    degeneracy: int = 0
    community_degeneracy: int = 0
    triangle_count: int = 0
    relevant_pair_counts: dict[tuple[int, int], int] = field(default_factory=dict)


def oracle_report(g: Graph, ks: Sequence[int] = ()) -> OracleReport:
    report = OracleReport(
        degeneracy=exact_degeneracy(g),
        community_degeneracy=exact_community_degeneracy(g),
        triangle_count=brute_force_triangles(g),
    )
    for k in ks:
        report.clique_counts[k] = len(brute_force_cliques(g, k))
    return report
