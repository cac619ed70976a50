"""Sparse graph storage, vertex orders and orientation.

A :class:`Graph` is an undirected simple graph in compressed adjacency
(CSR) form.  Vertices are compacted to ``0..n-1``; ``Graph.ids`` keeps the
identifier each vertex had in the input.

An :class:`OrientedGraph` is the acyclic graph obtained by directing every
edge from the endpoint earlier in a :class:`VertexOrder` to the later one.
Its vertices are *positions* in that order, so "sorted by rank" is plain
ascending order and every directed edge ``(u, v)`` has ``u < v``.
"""

from __future__ import annotations

import io
import struct
from bisect import bisect_left
from dataclasses import dataclass, field
from functools import cached_property
from typing import BinaryIO, Iterable, Iterator, Sequence, TextIO

import numpy as np

__all__ = [
    "Graph",
    "VertexOrder",
    "OrientedGraph",
    "EdgeListError",
    "load_edge_list",
    "write_edge_list",
    "read_graph",
    "save_binary",
    "load_binary",
    "orient",
    "induced_subgraph",
]

BINARY_MAGIC = b"KCLQGRPH"
BINARY_VERSION = 1


class EdgeListError(ValueError):
    """Raised for malformed edge-list input."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def _as_index_array(values) -> np.ndarray:
    return np.ascontiguousarray(values, dtype=np.int64)


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected simple graph in CSR form.

    ``offsets`` has length ``n + 1``; the neighbors of ``u`` are
    ``neighbors[offsets[u]:offsets[u + 1]]``, sorted ascending.
    """

    n: int
    offsets: np.ndarray
    neighbors: np.ndarray
    ids: np.ndarray

    def __post_init__(self):
        if len(self.offsets) != self.n + 1:
            raise ValueError("offsets must have length n + 1")
        if len(self.ids) != self.n:
            raise ValueError("ids must have length n")

    @classmethod
    def from_edges(
        cls, n: int, edges: Iterable[tuple[int, int]], ids: Sequence[int] | None = None
    ) -> "Graph":
        """Build a graph on ``0..n-1``; self-loops and duplicates are dropped."""
        adj: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            if u != v:
                adj[u].add(v)
                adj[v].add(u)
        offsets = np.zeros(n + 1, dtype=np.int64)
        offsets[1:] = np.cumsum([len(a) for a in adj])
        neighbors = np.fromiter(
            (v for a in adj for v in sorted(a)), dtype=np.int64, count=int(offsets[-1])
        )
        id_arr = _as_index_array(np.arange(n) if ids is None else ids)
        return cls(n, offsets, neighbors, id_arr)

    @property
    def m(self) -> int:
        return len(self.neighbors) // 2

    @cached_property
    def adj(self) -> list[list[int]]:
        """Neighbor lists as Python lists (fast for scalar loops)."""
        nb = self.neighbors.tolist()
        off = self.offsets.tolist()
        return [nb[off[u]:off[u + 1]] for u in range(self.n)]

    @cached_property
    def adj_sets(self) -> list[frozenset[int]]:
        return [frozenset(a) for a in self.adj]

    def degree(self, u: int) -> int:
        return int(self.offsets[u + 1] - self.offsets[u])

    def degrees(self) -> np.ndarray:
        return np.diff(self.offsets)

    def neighbors_of(self, u: int) -> np.ndarray:
        return self.neighbors[self.offsets[u]:self.offsets[u + 1]]

    def edges(self) -> Iterator[tuple[int, int]]:
        """Edges ``(u, v)`` with ``u < v`` in canonical (lexicographic) order."""
        for u, nbrs in enumerate(self.adj):
            for v in nbrs[bisect_left(nbrs, u + 1):]:
                yield u, v

    @cached_property
    def edge_array(self) -> np.ndarray:
        """Canonical ``(m, 2)`` edge array; the row index is the edge id."""
        arr = np.fromiter(
            (x for e in self.edges() for x in e), dtype=np.int64, count=2 * self.m
        )
        return arr.reshape(self.m, 2)

    @cached_property
    def edge_index(self) -> dict[int, int]:
        """Map ``u * n + v`` (``u < v``) to the canonical edge id."""
        n = self.n
        return {u * n + v: i for i, (u, v) in enumerate(self.edges())}

    def edge_id(self, u: int, v: int) -> int:
        """Canonical id of edge ``{u, v}``, or -1 if absent."""
        if u > v:
            u, v = v, u
        return self.edge_index.get(u * self.n + v, -1)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj_sets[u]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.offsets, other.offsets)
            and np.array_equal(self.neighbors, other.neighbors)
            and np.array_equal(self.ids, other.ids)
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


# ---------------------------------------------------------------------------
# ingestion


def _text_lines(source) -> Iterator[str]:
    if isinstance(source, (bytes, bytearray)):
        source = io.BytesIO(source)
    elif isinstance(source, str):
        source = io.StringIO(source)
    for line in source:
        if isinstance(line, (bytes, bytearray)):
            line = line.decode("utf-8")
        yield line


def load_edge_list(source: BinaryIO | TextIO | bytes | str) -> Graph:
    """Parse whitespace-separated vertex-id pairs, one per line.

    Lines starting with ``#`` and blank lines are skipped.  Ids must be
    non-negative integers and are compacted to ``0..n-1`` in ascending
    order.  A ``str`` argument is treated as the text itself, not a path
    (use :func:`read_graph` for files).
    """
    pairs: list[tuple[int, int]] = []
    for lineno, line in enumerate(_text_lines(source), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        tokens = stripped.split()
        if len(tokens) != 2:
            raise EdgeListError(lineno, f"expected 2 vertex ids, got {len(tokens)}")
        try:
            u, v = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise EdgeListError(lineno, f"malformed vertex id in {stripped!r}") from None
        if u < 0 or v < 0:
            raise EdgeListError(lineno, "vertex ids must be non-negative")
        pairs.append((u, v))

    if not pairs:
        return Graph.from_edges(0, [])
    raw = np.asarray(pairs, dtype=np.int64)
    ids, compact = np.unique(raw, return_inverse=True)
    compact = compact.reshape(raw.shape)
    return Graph.from_edges(len(ids), map(tuple, compact.tolist()), ids=ids)


def write_edge_list(g: Graph, out: TextIO) -> None:
    """Write ``g`` using its original ids.

    Isolated vertices are written as self-loop lines so that reading the
    output back reproduces the same vertex set.
    """
    ids = g.ids.tolist()
    for u, nbrs in enumerate(g.adj):
        if not nbrs:
            out.write(f"{ids[u]} {ids[u]}\n")
    for u, v in g.edges():
        out.write(f"{ids[u]} {ids[v]}\n")


def save_binary(g: Graph, out: BinaryIO) -> None:
    """Binary cache: magic, version, n, m, offsets, neighbors, ids (int64 LE)."""
    out.write(BINARY_MAGIC)
    out.write(struct.pack("<qqq", BINARY_VERSION, g.n, g.m))
    for arr in (g.offsets, g.neighbors, g.ids):
        out.write(arr.astype("<i8").tobytes())


def load_binary(stream: BinaryIO) -> Graph:
    magic = stream.read(len(BINARY_MAGIC))
    if magic != BINARY_MAGIC:
        raise ValueError("not a binary graph cache (bad magic)")
    version, n, m = struct.unpack("<qqq", stream.read(24))
    if version != BINARY_VERSION:
        raise ValueError(f"unsupported binary cache version {version}")

    def take(count: int) -> np.ndarray:
        buf = stream.read(8 * count)
        if len(buf) != 8 * count:
            raise ValueError("truncated binary graph cache")
        return np.frombuffer(buf, dtype="<i8").astype(np.int64)

    offsets = take(n + 1)
    neighbors = take(2 * m)
    ids = take(n)
    return Graph(n, offsets, neighbors, ids)


def read_graph(path) -> Graph:
    """Read a graph file, detecting the binary cache by its magic bytes."""
    with open(path, "rb") as fh:
        head = fh.read(len(BINARY_MAGIC))
        fh.seek(0)
        if head == BINARY_MAGIC:
            return load_binary(fh)
        return load_edge_list(fh)


# ---------------------------------------------------------------------------
# orders and orientation


@dataclass(frozen=True, eq=False)
class VertexOrder:
    """A total order: ``rank[v]`` is the position of ``v``; ``inv[p]`` the vertex at ``p``."""

    rank: np.ndarray
    inv: np.ndarray

    def __post_init__(self):
        n = len(self.inv)
        if len(self.rank) != n:
            raise ValueError("rank and inv differ in length")
        if n and not np.array_equal(self.rank[self.inv], np.arange(n)):
            raise ValueError("order is not a permutation")

    @classmethod
    def from_sequence(cls, vertices: Sequence[int]) -> "VertexOrder":
        """Order in which ``vertices[0]`` comes first."""
        inv = _as_index_array(vertices)
        n = len(inv)
        if n and (inv.min() < 0 or inv.max() >= n or len(np.unique(inv)) != n):
            raise ValueError("order is not a permutation of 0..n-1")
        rank = np.empty(n, dtype=np.int64)
        rank[inv] = np.arange(n)
        return cls(rank, inv)

    @classmethod
    def identity(cls, n: int) -> "VertexOrder":
        return cls.from_sequence(np.arange(n))

    def __len__(self) -> int:
        return len(self.inv)


@dataclass(frozen=True, eq=False)
class OrientedGraph:
    """Acyclic orientation of a graph by a total order.

    Vertex ``p`` is the ``p``-th vertex of the order; ``labels[p]`` is its
    id in :attr:`graph`.  Out-lists are ascending, i.e. sorted by rank.  The
    edge id of ``(u, out[u][i])`` is ``out_offsets[u] + i``.
    """

    graph: Graph
    labels: np.ndarray
    out_offsets: np.ndarray
    out_targets: np.ndarray
    in_degree: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def m(self) -> int:
        return len(self.out_targets)

    @cached_property
    def out(self) -> list[list[int]]:
        t = self.out_targets.tolist()
        off = self.out_offsets.tolist()
        return [t[off[u]:off[u + 1]] for u in range(self.n)]

    @cached_property
    def out_sets(self) -> list[frozenset[int]]:
        return [frozenset(a) for a in self.out]

    @cached_property
    def original_ids(self) -> list[int]:
        """Input-file id of each position (used when emitting cliques)."""
        return self.graph.ids[self.labels].tolist()

    @cached_property
    def tails(self) -> np.ndarray:
        return np.repeat(np.arange(self.n, dtype=np.int64), np.diff(self.out_offsets))

    def out_degree(self, u: int) -> int:
        return int(self.out_offsets[u + 1] - self.out_offsets[u])

    def max_out_degree(self) -> int:
        return int(np.diff(self.out_offsets).max(initial=0))

    def edge(self, eid: int) -> tuple[int, int]:
        return int(self.tails[eid]), int(self.out_targets[eid])

    def edges(self) -> Iterator[tuple[int, int, int]]:
        """Yield ``(edge_id, tail, head)`` in edge-id order."""
        eid = 0
        for u, outs in enumerate(self.out):
            for v in outs:
                yield eid, u, v
                eid += 1

    def edge_id(self, u: int, v: int) -> int:
        """Id of directed edge ``(u, v)``, or -1 (binary search in ``out[u]``)."""
        outs = self.out[u]
        i = bisect_left(outs, v)
        if i < len(outs) and outs[i] == v:
            return int(self.out_offsets[u]) + i
        return -1

    def to_graph(self) -> Graph:
        """Forget directions; vertex ``p`` of the result is position ``p``."""
        ids = np.asarray(self.original_ids, dtype=np.int64)
        return Graph.from_edges(self.n, ((u, v) for _, u, v in self.edges()), ids=ids)

    def check_acyclic(self) -> None:
        if self.m and not np.all(self.tails < self.out_targets):
            raise AssertionError("orientation is not by a total order")

    def __repr__(self) -> str:
        return f"OrientedGraph(n={self.n}, m={self.m})"


def _from_out_lists(graph: Graph, labels: np.ndarray, out: list[list[int]]) -> OrientedGraph:
    n = len(out)
    offsets = np.zeros(n + 1, dtype=np.int64)
    offsets[1:] = np.cumsum([len(o) for o in out])
    targets = np.fromiter((v for o in out for v in o), dtype=np.int64, count=int(offsets[-1]))
    in_degree = np.bincount(targets, minlength=n).astype(np.int64)
    dag = OrientedGraph(graph, labels, offsets, targets, in_degree)
    dag.check_acyclic()
    return dag


def orient(g: Graph, order: VertexOrder) -> OrientedGraph:
    """Direct every edge of ``g`` from its lower-ranked to its higher-ranked endpoint."""
    if len(order) != g.n:
        raise ValueError(f"order has {len(order)} entries, graph has {g.n} vertices")
    rank = order.rank.tolist()
    out: list[list[int]] = []
    for v in order.inv.tolist():
        rv = rank[v]
        out.append(sorted(r for r in (rank[w] for w in g.adj[v]) if r > rv))
    return _from_out_lists(g, order.inv.copy(), out)


def induced_subgraph(dag: OrientedGraph, vertices: Sequence[int]) -> OrientedGraph:
    """Subgraph induced by ``vertices`` (ascending positions of ``dag``).

    Vertices are relabeled ``0..len-1`` preserving their relative order;
    ``labels`` of the result still refer to ``dag.graph``.
    """
    vs = [int(v) for v in vertices]
    if any(a >= b for a, b in zip(vs, vs[1:])):
        raise ValueError("vertices must be strictly increasing")
    local = {v: i for i, v in enumerate(vs)}
    out = []
    for v in vs:
        out.append([local[w] for w in dag.out[v] if w in local])
    labels = dag.labels[np.asarray(vs, dtype=np.int64)] if vs else np.zeros(0, np.int64)
    return _from_out_lists(dag.graph, labels, out)
