"""Edge communities, triangle counts and edge-existence probes.

For a directed edge ``(u, v)`` of an :class:`OrientedGraph` the community
``C(u, v)`` is ``out(u) & in(v)``: the vertices ``w`` with ``u < w < v``
that close a triangle with the edge.  Every triangle belongs to exactly one
community (that of its first-to-last edge), so the community sizes sum to
the triangle count.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .graph import Graph, OrientedGraph, VertexOrder, orient
from .ordering import EdgeOrder

__all__ = [
    "CommunityStore",
    "HashProbe",
    "MatrixProbe",
    "LocalGraph",
    "build_communities",
    "build_probe",
    "count_triangles",
    "merge_intersect",
    "restricted_community",
    "DEFAULT_MATRIX_THRESHOLD",
]

DEFAULT_MATRIX_THRESHOLD = 256


def merge_intersect(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """Intersection of two ascending sequences by a linear merge."""
    out = []
    i = j = 0
    la, lb = len(a), len(b)
    while i < la and j < lb:
        x, y = a[i], b[j]
        if x == y:
            out.append(x)
            i += 1
            j += 1
        elif x < y:
            i += 1
        else:
            j += 1
    return out


@dataclass(frozen=True, eq=False)
class CommunityStore:
    """Concatenated communities: ``members[offsets[e]:offsets[e + 1]]`` is ``C(e)``."""

    offsets: np.ndarray
    members: np.ndarray

    @cached_property
    def lists(self) -> list[list[int]]:
        mem = self.members.tolist()
        off = self.offsets.tolist()
        return [mem[off[e]:off[e + 1]] for e in range(len(off) - 1)]

    @cached_property
    def sizes(self) -> np.ndarray:
        return np.diff(self.offsets)

    def community(self, eid: int) -> np.ndarray:
        return self.members[self.offsets[eid]:self.offsets[eid + 1]]

    @property
    def triangles(self) -> int:
        return len(self.members)

    @property
    def gamma(self) -> int:
        """Size of the largest community."""
        return int(self.sizes.max(initial=0))


def build_communities(dag: OrientedGraph) -> CommunityStore:
    """Compute every ``C(u, v)`` as the ascending list of ``w in out(u)`` with ``v in out(w)``."""
    out = dag.out
    out_sets = dag.out_sets
    lists = []
    for u in range(dag.n):
        outs = out[u]
        for i, v in enumerate(outs):
            # w < v by sortedness of out(u)
            lists.append([w for w in outs[:i] if v in out_sets[w]])
    offsets = np.zeros(len(lists) + 1, dtype=np.int64)
    offsets[1:] = np.cumsum([len(c) for c in lists])
    members = np.fromiter((w for c in lists for w in c), dtype=np.int64, count=int(offsets[-1]))
    store = CommunityStore(offsets, members)
    store.__dict__["lists"] = lists
    return store


def count_triangles(g: Graph) -> int:
    """Exact triangle count: merge-intersect out-lists under the identity orientation."""
    dag = orient(g, VertexOrder.identity(g.n))
    out = dag.out
    return sum(len(merge_intersect(out[u], out[v])) for _, u, v in dag.edges())


def restricted_community(g: Graph, e: int, edge_order: EdgeOrder) -> list[int]:
    """Common neighbours ``w`` of edge ``e`` whose edges to both endpoints come after ``e``."""
    u, v = (int(x) for x in g.edge_array[e])
    rank = edge_order.rank
    r = rank[e]
    n = g.n
    index = g.edge_index
    out = []
    for w in merge_intersect(g.adj[u], g.adj[v]):
        e1 = index[u * n + w] if u < w else index[w * n + u]
        e2 = index[v * n + w] if v < w else index[w * n + v]
        if rank[e1] > r and rank[e2] > r:
            out.append(w)
    return out


class LocalGraph:
    """Adjacency matrix of a small vertex set with consecutive local ids.

    ``vertices`` are ascending positions of the parent graph; local id ``i``
    stands for ``vertices[i]``.  Row ``i`` of the matrix is the bitmask
    ``rows[i]`` of local out-neighbours (all ``> i``), column ``j`` is
    ``cols[j]``.  The community of local edge ``(a, b)`` is the indicator
    bitset ``rows[a] & cols[b]``.
    """

    __slots__ = ("vertices", "rows", "cols")

    def __init__(self, vertices: list[int], rows: list[int]):
        self.vertices = vertices
        self.rows = rows
        cols = [0] * len(rows)
        for a, row in enumerate(rows):
            bit = 1 << a
            while row:
                low = row & -row
                cols[low.bit_length() - 1] |= bit
                row ^= low
        self.cols = cols

    @classmethod
    def induced(cls, out_sets: Sequence[frozenset[int]], vertices: list[int], keep=None) -> "LocalGraph":
        """Local graph on ``vertices``; ``keep(x, y)`` may veto individual edges."""
        rows = []
        for i, x in enumerate(vertices):
            nbrs = out_sets[x]
            row = 0
            for j in range(i + 1, len(vertices)):
                y = vertices[j]
                if y in nbrs and (keep is None or keep(x, y)):
                    row |= 1 << j
            rows.append(row)
        return cls(vertices, rows)

    def __len__(self) -> int:
        return len(self.vertices)

    def has_edge(self, a: int, b: int) -> bool:
        return bool((self.rows[a] >> b) & 1)

    def community(self, a: int, b: int) -> int:
        return self.rows[a] & self.cols[b]


class HashProbe:
    """Global hash table of directed edges ``u * n + v -> edge id``."""

    kind = "hash"

    def __init__(self, dag: OrientedGraph):
        n = dag.n
        self.n = n
        self.table = {u * n + v: eid for eid, u, v in dag.edges()}

    def edge_id(self, u: int, v: int) -> int:
        return self.table.get(u * self.n + v, -1)

    def has_edge(self, u: int, v: int) -> bool:
        return u * self.n + v in self.table


class MatrixProbe:
    """Per-community adjacency matrices, built lazily per top-level edge.

    :meth:`scope` returns the :class:`LocalGraph` of ``G[C(e)]``; probes
    outside a scope fall back to a binary search in the out-list.
    """

    kind = "matrix"

    def __init__(self, dag: OrientedGraph, store: CommunityStore):
        self.dag = dag
        self.store = store

    def edge_id(self, u: int, v: int) -> int:
        return self.dag.edge_id(u, v)

    def has_edge(self, u: int, v: int) -> bool:
        return self.dag.edge_id(u, v) >= 0

    def scope(self, eid: int) -> LocalGraph:
        return LocalGraph.induced(self.dag.out_sets, self.store.lists[eid])


def build_probe(
    dag: OrientedGraph,
    store: CommunityStore,
    gamma: int | None = None,
    threshold: int = DEFAULT_MATRIX_THRESHOLD,
    strategy: str = "auto",
):
    """Matrix probes while the largest community fits ``threshold``, else a hash table."""
    if gamma is None:
        gamma = store.gamma
    if strategy == "auto":
        strategy = "matrix" if gamma <= threshold else "hash"
    if strategy == "matrix":
        return MatrixProbe(dag, store)
    if strategy == "hash":
        return HashProbe(dag)
    raise ValueError(f"unknown probe strategy {strategy!r}")
