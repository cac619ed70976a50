"""Small named graphs and seeded random generators used by tests, CLI and bench."""

from __future__ import annotations

from itertools import combinations

import numpy as np

from .graph import Graph


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, combinations(range(n), 2))


def star_graph(leaves: int) -> Graph:
    """Center 0 joined to ``leaves`` leaf vertices."""
    return Graph.from_edges(leaves + 1, ((0, i) for i in range(1, leaves + 1)))


def hypercube(d: int) -> Graph:
    n = 1 << d
    return Graph.from_edges(n, ((u, u ^ (1 << b)) for u in range(n) for b in range(d)))


def k6_minus_edge() -> Graph:
    """K6 on v1..v6 (ids 0..5) without the edge {v3, v4}.

    It contains exactly two 5-cliques and no 6-clique.
    """
    edges = [(u, v) for u, v in combinations(range(6), 2) if (u, v) != (2, 3)]
    return Graph.from_edges(6, edges, ids=np.arange(1, 7))


def random_graph(n: int, p: float, seed: int) -> Graph:
    """Erdos-Renyi G(n, p): each pair kept independently with probability ``p``."""
    rng = np.random.default_rng(seed)
    pairs = list(combinations(range(n), 2))
    keep = rng.random(len(pairs)) < p
    return Graph.from_edges(n, (e for e, k in zip(pairs, keep) if k))


def random_corpus(count: int = 200, n_min: int = 5, n_max: int = 24, seed: int = 0):
    """Deterministic list of ``(name, graph)`` G(n, p) instances.

    Sizes cycle through ``n_min..n_max`` and densities through 0.1..0.9.
    """
    sizes = n_max - n_min + 1
    out = []
    for i in range(count):
        n = n_min + i % sizes
        p = round(0.1 * (1 + (i * 7) % 9), 1)
        out.append((f"gnp-{i:03d}-n{n}-p{p}", random_graph(n, p, seed + i)))
    return out


def collaboration_graph(
    authors: int = 40_000,
    papers: int = 70_000,
    group_size: int = 24,
    max_team: int = 9,
    seed: int = 0,
) -> Graph:
    """Co-authorship graph: each paper makes its authors a clique.

    Authors belong to groups of ``group_size``; a paper draws a team (size
    from a truncated power law on ``2..max_team``) mostly from one group,
    with activity-skewed author choice and occasional outside members.
    """
    rng = np.random.default_rng(seed)
    n_groups = max(1, authors // group_size)
    sizes = np.arange(2, max_team + 1)
    size_p = sizes.astype(float) ** -2.2
    size_p /= size_p.sum()
    activity = 1.0 / np.arange(1, group_size + 1) ** 0.8
    activity /= activity.sum()

    team_sizes = rng.choice(sizes, size=papers, p=size_p)
    groups = rng.integers(n_groups, size=papers)
    # weighted sampling without replacement: smallest exponential race times win
    race = np.argsort(rng.exponential(size=(papers, group_size)) / activity, axis=1)
    outside = rng.random(papers) < 0.25
    outsider = rng.integers(n_groups * group_size, size=papers)

    edges: set[tuple[int, int]] = set()
    for i in range(papers):
        base = int(groups[i]) * group_size
        team = [base + int(x) for x in race[i, : team_sizes[i]]]
        if outside[i]:
            team[-1] = int(outsider[i])
        edges.update(combinations(sorted(set(team)), 2))
    return Graph.from_edges(n_groups * group_size, edges)
