"""Vertex and edge orders that keep out-degrees and communities small.

Four orders are provided:

* :func:`degeneracy_order` - exact min-degree peeling;
* :func:`approx_degeneracy_order` - round-based peeling against the average
  degree, low depth, out-degree within ``(2 + 2 eps)`` of the degeneracy;
* :func:`commdeg_order_greedy` - edge peeling by fewest remaining
  triangles, whose largest observed count is the community degeneracy;
* :func:`approx_commdeg_order` - round-based edge peeling against
  ``(3 + eps) * T / m``.

Ties are always broken towards the smallest vertex or edge id.  Edge ids
refer to :attr:`Graph.edge_array` (pairs ``u < v`` in lexicographic order).
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import TextIO

import numpy as np

from .graph import Graph, VertexOrder, orient

__all__ = [
    "DegeneracyResult",
    "EdgeOrder",
    "CommDegResult",
    "degeneracy_order",
    "approx_degeneracy_order",
    "commdeg_order_greedy",
    "approx_commdeg_order",
    "edge_triangles",
    "write_order",
    "read_order",
]


@dataclass(frozen=True)
class DegeneracyResult:
    order: VertexOrder
    s: int
    """Degeneracy (exact) or achieved max out-degree (approximate)."""
    rounds: int = 0


@dataclass(frozen=True, eq=False)
class EdgeOrder:
    rank: np.ndarray
    inv: np.ndarray

    @classmethod
    def from_sequence(cls, edges) -> "EdgeOrder":
        inv = np.asarray(edges, dtype=np.int64)
        m = len(inv)
        rank = np.full(m, -1, dtype=np.int64)
        rank[inv] = np.arange(m)
        if m and (rank < 0).any():
            raise ValueError("edge order is not a permutation")
        return cls(rank, inv)

    def __len__(self) -> int:
        return len(self.inv)


@dataclass(frozen=True)
class CommDegResult:
    edge_order: EdgeOrder
    sigma: int
    """Largest remaining-triangle count of an edge at the time it was removed."""
    rounds: int = 0


def _check_eps(eps: float) -> None:
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps}")


class _BucketQueue:
    """Min-queue over small integer keys; ties pop the smallest item.

    Each bucket is a heap, entries are invalidated lazily: an entry is live
    only if ``key[item]`` still equals the bucket it sits in.
    """

    def __init__(self, keys: list[int]):
        self.key = keys
        size = (max(keys) if keys else 0) + 1
        self.buckets: list[list[int]] = [[] for _ in range(size)]
        for item, k in enumerate(keys):
            self.buckets[k].append(item)
        for b in self.buckets:
            heapq.heapify(b)
        self.lo = 0
        self.removed = [False] * len(keys)

    def decrease(self, item: int) -> None:
        k = self.key[item] - 1
        self.key[item] = k
        heapq.heappush(self.buckets[k], item)
        if k < self.lo:
            self.lo = k

    def pop(self) -> tuple[int, int]:
        while True:
            bucket = self.buckets[self.lo]
            while bucket:
                item = heapq.heappop(bucket)
                if not self.removed[item] and self.key[item] == self.lo:
                    self.removed[item] = True
                    return item, self.lo
            self.lo += 1


def degeneracy_order(g: Graph) -> DegeneracyResult:
    """Repeatedly remove a vertex of minimum remaining degree."""
    queue = _BucketQueue(g.degrees().tolist())
    order = []
    s = 0
    for _ in range(g.n):
        v, d = queue.pop()
        order.append(v)
        s = max(s, d)
        for w in g.adj[v]:
            if not queue.removed[w]:
                queue.decrease(w)
    return DegeneracyResult(VertexOrder.from_sequence(order), s)


def approx_degeneracy_order(g: Graph, eps: float = 0.5) -> DegeneracyResult:
    """Peel, per round, every vertex with degree <= (1 + eps) * average degree."""
    _check_eps(eps)
    degree = g.degrees().tolist()
    alive = set(range(g.n))
    edges_left = g.m
    order: list[int] = []
    rounds = 0
    while alive:
        rounds += 1
        threshold = (1 + eps) * 2 * edges_left / len(alive)
        batch = sorted(v for v in alive if degree[v] <= threshold)
        alive.difference_update(batch)
        for v in batch:
            for w in g.adj[v]:
                if w in alive:
                    degree[w] -= 1
                    edges_left -= 1
        # edges inside the batch
        batch_set = set(batch)
        for v in batch:
            edges_left -= sum(1 for w in g.adj[v] if w in batch_set and w > v)
        order.extend(batch)
    vo = VertexOrder.from_sequence(order)
    return DegeneracyResult(vo, orient(g, vo).max_out_degree(), rounds)


def edge_triangles(g: Graph) -> list[tuple[int, int, int]]:
    """Every triangle once, as a triple of canonical edge ids."""
    eid = g.edge_index
    n = g.n
    adj_sets = g.adj_sets
    tris = []
    for u, nbrs in enumerate(g.adj):
        for v in nbrs:
            if v <= u:
                continue
            e_uv = eid[u * n + v]
            for w in nbrs:
                if w > v and w in adj_sets[v]:
                    tris.append((e_uv, eid[u * n + w], eid[v * n + w]))
    return tris


def commdeg_order_greedy(g: Graph) -> CommDegResult:
    """Repeatedly remove the edge contained in the fewest remaining triangles."""
    tris = edge_triangles(g)
    incident: list[list[int]] = [[] for _ in range(g.m)]
    for t, (a, b, c) in enumerate(tris):
        incident[a].append(t)
        incident[b].append(t)
        incident[c].append(t)
    queue = _BucketQueue([len(x) for x in incident])
    alive = [True] * len(tris)
    order = []
    sigma = 0
    for _ in range(g.m):
        e, count = queue.pop()
        order.append(e)
        sigma = max(sigma, count)
        for t in incident[e]:
            if alive[t]:
                alive[t] = False
                for f in tris[t]:
                    if f != e:
                        queue.decrease(f)
    return CommDegResult(EdgeOrder.from_sequence(order), sigma)


def approx_commdeg_order(g: Graph, eps: float = 0.5) -> CommDegResult:
    """Round-based edge peeling with threshold ``(3 + eps) * T / m``.

    ``T`` and ``m`` are the triangles and edges still present at the start
    of the round.  Within a round edges are appended by ascending id.
    """
    _check_eps(eps)
    tris = edge_triangles(g)
    incident: list[list[int]] = [[] for _ in range(g.m)]
    for t, (a, b, c) in enumerate(tris):
        incident[a].append(t)
        incident[b].append(t)
        incident[c].append(t)
    count = [len(x) for x in incident]
    alive_tri = [True] * len(tris)
    remaining = set(range(g.m))
    n_tri = len(tris)
    order: list[int] = []
    sigma = 0
    rounds = 0
    while remaining:
        rounds += 1
        threshold = (3 + eps) * n_tri / len(remaining)
        batch = sorted(e for e in remaining if count[e] <= threshold)
        remaining.difference_update(batch)
        order.extend(batch)
        for e in batch:
            sigma = max(sigma, count[e])
        for e in batch:
            for t in incident[e]:
                if alive_tri[t]:
                    alive_tri[t] = False
                    n_tri -= 1
                    for f in tris[t]:
                        count[f] -= 1
    return CommDegResult(EdgeOrder.from_sequence(order), sigma, rounds)


def round_bound(m: int, eps: float) -> int:
    """``ceil(log_{1+eps} m) + 1``, the round budget checked for the approximate edge order."""
    if m <= 1:
        return 1
    return math.ceil(math.log(m) / math.log1p(eps)) + 1


def write_order(order, out: TextIO) -> None:
    """Write a vertex or edge order as newline-separated ids, first element first."""
    for x in order.inv.tolist():
        out.write(f"{x}\n")


def read_order(source: TextIO, kind: str = "vertex"):
    items = [int(line) for line in source if line.strip()]
    if kind == "vertex":
        return VertexOrder.from_sequence(items)
    if kind == "edge":
        return EdgeOrder.from_sequence(items)
    raise ValueError(f"unknown order kind {kind!r}")
