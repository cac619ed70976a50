"""Community-centric k-clique listing.

A k-clique, oriented by a total order, contains every other clique vertex
in the community of the edge joining its first and last vertex.  So the
outer loop visits edges with at least ``k - 2`` community members and
searches each community for a ``(k - 2)``-clique.  The search
(:func:`recursive_count`) grows cliques two vertices at a time: it picks
an edge ``(u, v)`` inside the candidate set, narrows the set to the
community of that edge and recurses for ``c - 2`` more vertices.  Only
pairs with at least ``c - 2`` candidates ordered between them can lead to a
clique; all other pairs are skipped without probing.

Three drivers are provided: :func:`run_degeneracy` (any vertex order,
usually a degeneracy order), :func:`run_commdeg` (edge-ordered variant
parameterized by community degeneracy) and :func:`run_hybrid`
(approximate order outside, exact degeneracy order per out-neighborhood).
:func:`count_cliques` wires orders and drivers together.
"""

from __future__ import annotations

import multiprocessing as mp
import time
from concurrent.futures import ProcessPoolExecutor, ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import partial
from typing import Iterator, Sequence

from .community import (
    CommunityStore,
    LocalGraph,
    MatrixProbe,
    build_communities,
    build_probe,
    merge_intersect,
    restricted_community,
)
from .graph import Graph, OrientedGraph, VertexOrder, induced_subgraph, orient
from .ordering import (
    EdgeOrder,
    approx_commdeg_order,
    approx_degeneracy_order,
    commdeg_order_greedy,
    degeneracy_order,
)

__all__ = [
    "ORDERS",
    "CandidateSet",
    "CliqueSink",
    "SearchStats",
    "PruneConfig",
    "CliqueResult",
    "relevant_pairs",
    "recursive_count",
    "run_degeneracy",
    "run_commdeg",
    "run_hybrid",
    "count_cliques",
]

ORDERS = ("degeneracy", "approx-degeneracy", "hybrid", "commdeg", "approx-commdeg")


class CandidateSet:
    """Vertices sorted by rank with O(1) position lookup.

    ``delta(u, v)`` is the number of members ordered strictly between
    ``u`` and ``v``.
    """

    def __init__(self, vertices: Sequence[int]):
        self.vertices = list(vertices)
        if any(a >= b for a, b in zip(self.vertices, self.vertices[1:])):
            raise ValueError("candidate set must be strictly increasing")
        self._index = {v: i for i, v in enumerate(self.vertices)}

    def __len__(self) -> int:
        return len(self.vertices)

    def __iter__(self) -> Iterator[int]:
        return iter(self.vertices)

    def __getitem__(self, i: int) -> int:
        return self.vertices[i]

    def index(self, v: int) -> int:
        return self._index[v]

    def delta(self, u: int, v: int) -> int:
        return self._index[v] - self._index[u] - 1


def relevant_pairs(I: Sequence[int], c: int) -> Iterator[tuple[int, int]]:
    """Pairs ``(u, v)`` of ``I`` (in order) with at least ``c`` members between them.

    There are exactly ``comb(len(I) - c, 2)`` of them.
    """
    vs = list(I)
    n = len(vs)
    for i in range(n - c - 1):
        u = vs[i]
        for j in range(i + c + 1, n):
            yield u, vs[j]


@dataclass
class SearchStats:
    """Work counters of the recursive search.

    ``edge_probes`` counts examined pairs, ``intersections`` the candidate
    sets narrowed to a community, ``listed_cliques`` the cliques reported at
    the leaves and ``max_depth`` the deepest nesting of calls with ``c >= 2``.
    """

    recursive_calls: int = 0
    edge_probes: int = 0
    intersections: int = 0
    listed_cliques: int = 0
    max_depth: int = 0

    def merge(self, other: "SearchStats") -> None:
        self.recursive_calls += other.recursive_calls
        self.edge_probes += other.edge_probes
        self.intersections += other.intersections
        self.listed_cliques += other.listed_cliques
        self.max_depth = max(self.max_depth, other.max_depth)

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class PruneConfig:
    enabled: bool = True


class CliqueSink:
    """Receives cliques; counts them and, in collect mode, keeps them."""

    def __init__(self, collect: bool = False):
        self.collect = collect
        self.count = 0
        self.cliques: list[tuple[int, ...]] = []

    def emit(self, clique: tuple[int, ...]) -> None:
        self.count += 1
        if self.collect:
            self.cliques.append(clique)

    def merge(self, count: int, cliques: list | None) -> None:
        self.count += count
        if self.collect and cliques:
            self.cliques.extend(cliques)

    def canonical(self) -> list[tuple[int, ...]]:
        """Cliques with sorted vertices, in sorted order (duplicates kept)."""
        return sorted(tuple(sorted(c)) for c in self.cliques)


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


class _Search:
    """One task's search state; both candidate representations share the counters."""

    def __init__(self, dag: OrientedGraph, store, probe, sink: CliqueSink, stats: SearchStats, prune: bool):
        self.ids = dag.original_ids
        self.communities = store.lists if store is not None else None
        self.probe = probe
        self.sink = sink
        self.stats = stats
        self.prune = prune

    # -- candidate set as a rank-sorted list, hash probes, merge intersections

    def lists(self, I: list[int], c: int, prefix: tuple, depth: int) -> None:
        stats = self.stats
        sink = self.sink
        ids = self.ids
        stats.recursive_calls += 1
        n = len(I)
        if c == 1:
            stats.listed_cliques += n
            if sink.collect:
                for w in I:
                    sink.emit(prefix + (ids[w],))
            else:
                sink.count += n
            return
        if depth > stats.max_depth:
            stats.max_depth = depth
        edge_id = self.probe.edge_id
        if c == 2:
            stats.edge_probes += n * (n - 1) // 2
            for i in range(n):
                u = I[i]
                for j in range(i + 1, n):
                    if edge_id(u, I[j]) >= 0:
                        stats.listed_cliques += 1
                        sink.emit(prefix + (ids[u], ids[I[j]]))
            return
        gap = c - 1 if self.prune else 1
        communities = self.communities
        for i in range(n - gap):
            u = I[i]
            for j in range(i + gap, n):
                v = I[j]
                stats.edge_probes += 1
                eid = edge_id(u, v)
                if eid < 0:
                    continue
                stats.intersections += 1
                sub = merge_intersect(I[i + 1:j], communities[eid])
                self.lists(sub, c - 2, prefix + (ids[u], ids[v]), depth + 1)

    # -- candidate set as a bitmask over a LocalGraph

    def bits(self, local: LocalGraph, vmap: list[int], I: list[int], mask: int,
             c: int, prefix: tuple, depth: int) -> None:
        stats = self.stats
        sink = self.sink
        stats.recursive_calls += 1
        n = len(I)
        if c == 1:
            stats.listed_cliques += n
            if sink.collect:
                for a in I:
                    sink.emit(prefix + (vmap[a],))
            else:
                sink.count += n
            return
        if depth > stats.max_depth:
            stats.max_depth = depth
        rows = local.rows
        if c == 2:
            stats.edge_probes += n * (n - 1) // 2
            if sink.collect:
                for a in I:
                    for b in _bits(rows[a] & mask):
                        stats.listed_cliques += 1
                        sink.emit(prefix + (vmap[a], vmap[b]))
            else:
                found = 0
                for a in I:
                    found += (rows[a] & mask).bit_count()
                stats.listed_cliques += found
                sink.count += found
            return
        gap = c - 1 if self.prune else 1
        span = n - gap + 1
        if span < 2:
            return
        # every pair at index distance >= gap is probed; the row scan does them word-parallel
        stats.edge_probes += span * (span - 1) // 2
        cols = local.cols
        for i in range(n - gap):
            a = I[i]
            row = (rows[a] & mask) >> I[i + gap] << I[i + gap]
            while row:
                low = row & -row
                b = low.bit_length() - 1
                row ^= low
                stats.intersections += 1
                sub = mask & rows[a] & cols[b]
                self.bits(local, vmap, _bits(sub), sub, c - 2, prefix + (vmap[a], vmap[b]), depth + 1)


def recursive_count(
    dag: OrientedGraph,
    store: CommunityStore,
    probe,
    I: Sequence[int],
    c: int,
    prefix: tuple = (),
    sink: CliqueSink | None = None,
    stats: SearchStats | None = None,
    prune: bool | PruneConfig = True,
) -> int:
    """Report every ``prefix + S`` for a ``c``-clique ``S`` of ``dag[I]``.

    ``I`` holds ascending positions of ``dag``; ``prefix`` holds input ids
    and is assumed adjacent to all of ``I``.  With a :class:`MatrixProbe` the
    search runs on the adjacency bitmatrix of ``dag[I]``, otherwise on sorted
    lists with hash probes.  Returns the number of cliques reported.
    """
    if c < 1:
        raise ValueError("c must be >= 1")
    if isinstance(prune, PruneConfig):
        prune = prune.enabled
    sink = CliqueSink() if sink is None else sink
    stats = SearchStats() if stats is None else stats
    before = sink.count
    I = list(CandidateSet(I))
    search = _Search(dag, store, probe, sink, stats, prune)
    if isinstance(probe, MatrixProbe):
        local = LocalGraph.induced(dag.out_sets, I)
        vmap = [search.ids[v] for v in I]
        search.bits(local, vmap, list(range(len(I))), (1 << len(I)) - 1, c, tuple(prefix), 1)
    else:
        search.lists(I, c, tuple(prefix), 1)
    return sink.count - before


# ---------------------------------------------------------------------------
# parallel outer loops

_STATE = None


def _install_state(state) -> None:
    global _STATE
    _STATE = state


def _run_installed(worker, chunk):
    return worker(_STATE, chunk)


def _chunks(items: list, threads: int) -> list[list]:
    if not items:
        return []
    parts = min(len(items), max(1, threads * 4))
    return [items[i::parts] for i in range(parts)]


def _map_chunks(worker, state, items: list, threads: int, backend: str):
    """Run ``worker(state, chunk)`` over strided chunks; results in chunk order."""
    if threads < 1:
        raise ValueError("threads must be >= 1")
    chunks = _chunks(items, threads)
    if threads == 1 or len(chunks) <= 1:
        return [worker(state, ch) for ch in chunks]
    if backend == "thread":
        with ThreadPoolExecutor(threads) as ex:
            return list(ex.map(partial(worker, state), chunks))
    if backend != "process":
        raise ValueError(f"unknown backend {backend!r}")
    ctx = mp.get_context("fork")
    with ProcessPoolExecutor(threads, mp_context=ctx, initializer=_install_state, initargs=(state,)) as ex:
        return list(ex.map(_run_installed, [worker] * len(chunks), chunks))


def _reduce(results, sink: CliqueSink, stats: SearchStats) -> None:
    for count, cliques, part in results:
        sink.merge(count, cliques)
        stats.merge(part)


def _trivial(dag_or_graph, k: int, sink: CliqueSink, stats: SearchStats) -> int:
    """k = 1 lists vertices, k = 2 lists edges."""
    if isinstance(dag_or_graph, OrientedGraph):
        ids = dag_or_graph.original_ids
        edges = [(u, v) for _, u, v in dag_or_graph.edges()]
        n = dag_or_graph.n
    else:
        ids = dag_or_graph.ids.tolist()
        edges = list(dag_or_graph.edges())
        n = dag_or_graph.n
    before = sink.count
    if k == 1:
        for v in range(n):
            sink.emit((ids[v],))
    else:
        for u, v in edges:
            sink.emit((ids[u], ids[v]))
    stats.listed_cliques += sink.count - before
    return sink.count - before


def _check_k(k: int, minimum: int = 1) -> None:
    if k < minimum:
        raise ValueError(f"k must be >= {minimum}, got {k}")


def _degeneracy_worker(state, chunk):
    dag, store, probe, k, collect, prune = state
    sink = CliqueSink(collect)
    stats = SearchStats()
    search = _Search(dag, store, probe, sink, stats, prune)
    ids = search.ids
    tails = dag.tails
    heads = dag.out_targets
    matrix = isinstance(probe, MatrixProbe)
    for eid in chunk:
        u, v = int(tails[eid]), int(heads[eid])
        prefix = (ids[u], ids[v])
        members = store.lists[eid]
        if matrix:
            local = probe.scope(eid)
            vmap = [ids[w] for w in members]
            g = len(members)
            search.bits(local, vmap, list(range(g)), (1 << g) - 1, k - 2, prefix, 1)
        else:
            search.lists(members, k - 2, prefix, 1)
    return sink.count, sink.cliques if collect else None, stats


def run_degeneracy(
    dag: OrientedGraph,
    store: CommunityStore,
    probe,
    k: int,
    sink: CliqueSink | None = None,
    stats: SearchStats | None = None,
    prune: bool = True,
    threads: int = 1,
    backend: str = "process",
) -> int:
    """Count (or list) all k-cliques of ``dag`` via their supporting edges."""
    _check_k(k)
    sink = CliqueSink() if sink is None else sink
    stats = SearchStats() if stats is None else stats
    if k <= 2:
        return _trivial(dag, k, sink, stats)
    before = sink.count
    eligible = [e for e, size in enumerate(store.sizes.tolist()) if size >= k - 2]
    state = (dag, store, probe, k, sink.collect, prune)
    _reduce(_map_chunks(_degeneracy_worker, state, eligible, threads, backend), sink, stats)
    return sink.count - before


def _commdeg_worker(state, chunk):
    g, dag, edge_rank, k, collect, prune = state
    sink = CliqueSink(collect)
    stats = SearchStats()
    search = _Search(dag, None, None, sink, stats, prune)
    ids = search.ids
    n = g.n
    index = g.edge_index
    for eid, members in chunk:
        r = edge_rank[eid]
        u, v = dag.edge(eid)

        def later(x, y, r=r):
            return edge_rank[index[x * n + y]] > r

        local = LocalGraph.induced(dag.out_sets, members, keep=later)
        vmap = [ids[w] for w in members]
        size = len(members)
        search.bits(local, vmap, list(range(size)), (1 << size) - 1, k - 2, (ids[u], ids[v]), 1)
    return sink.count, sink.cliques if collect else None, stats


def run_commdeg(
    g: Graph,
    edge_order: EdgeOrder,
    k: int,
    sink: CliqueSink | None = None,
    stats: SearchStats | None = None,
    prune: bool = True,
    threads: int = 1,
    backend: str = "process",
) -> int:
    """Count k-cliques, each at its earliest edge under ``edge_order``.

    For edge ``e`` the candidates are the common neighbours reachable over
    edges ordered after ``e``, and the search only uses such edges, so a
    clique is found exactly at its first edge.
    """
    _check_k(k)
    sink = CliqueSink() if sink is None else sink
    stats = SearchStats() if stats is None else stats
    dag = orient(g, VertexOrder.identity(g.n))
    if k <= 2:
        return _trivial(dag, k, sink, stats)
    if len(edge_order) != g.m:
        raise ValueError("edge order does not cover the graph's edges")
    tasks = []
    for eid in range(g.m):
        members = restricted_community(g, eid, edge_order)
        if len(members) >= k - 2:
            tasks.append((eid, members))
    before = sink.count
    state = (g, dag, edge_order.rank.tolist(), k, sink.collect, prune)
    _reduce(_map_chunks(_commdeg_worker, state, tasks, threads, backend), sink, stats)
    return sink.count - before


def _hybrid_worker(state, chunk):
    dag, k, collect, prune, strategy = state
    sink = CliqueSink(collect)
    stats = SearchStats()
    ids = dag.original_ids
    for v in chunk:
        sub = induced_subgraph(dag, dag.out[v])
        sg = sub.to_graph()
        sdag = orient(sg, degeneracy_order(sg).order)
        sstore = build_communities(sdag)
        sprobe = build_probe(sdag, sstore, strategy=strategy)
        recursive_count(sdag, sstore, sprobe, range(sdag.n), k - 1, (ids[v],), sink, stats, prune)
    return sink.count, sink.cliques if collect else None, stats


def run_hybrid(
    g: Graph,
    k: int,
    eps: float = 0.5,
    sink: CliqueSink | None = None,
    stats: SearchStats | None = None,
    prune: bool = True,
    threads: int = 1,
    backend: str = "process",
    probe_strategy: str = "auto",
) -> int:
    """Approximate degeneracy order outside, exact order inside each out-neighbourhood.

    For every vertex ``v`` the subgraph on ``out(v)`` is re-oriented by its
    own degeneracy order and searched for ``(k - 1)``-cliques.
    """
    _check_k(k)
    sink = CliqueSink() if sink is None else sink
    stats = SearchStats() if stats is None else stats
    if k == 1:
        return _trivial(g, 1, sink, stats)
    dag = orient(g, approx_degeneracy_order(g, eps).order)
    vertices = [v for v in range(dag.n) if dag.out_degree(v) >= k - 1]
    before = sink.count
    state = (dag, k, sink.collect, prune, probe_strategy)
    _reduce(_map_chunks(_hybrid_worker, state, vertices, threads, backend), sink, stats)
    return sink.count - before


# ---------------------------------------------------------------------------
# one-call pipeline


@dataclass
class CliqueResult:
    k: int
    count: int
    order: str
    stats: SearchStats
    meta: dict = field(default_factory=dict)
    cliques: list | None = None
    elapsed_ms: float = 0.0

    def as_dict(self) -> dict:
        out = {"k": self.k, "count": self.count, "order": self.order}
        out.update(self.meta)
        out.update(self.stats.as_dict())
        out["elapsed_ms"] = round(self.elapsed_ms, 3)
        return out


def count_cliques(
    g: Graph,
    k: int,
    order: str = "degeneracy",
    eps: float = 0.5,
    threads: int = 1,
    prune: bool = True,
    collect: bool = False,
    backend: str = "process",
    probe_strategy: str = "auto",
) -> CliqueResult:
    """Run the full pipeline for one order mode (see :data:`ORDERS`)."""
    if order not in ORDERS:
        raise ValueError(f"unknown order {order!r}; choose from {', '.join(ORDERS)}")
    _check_k(k)
    if not eps > 0:
        raise ValueError("eps must be positive")
    start = time.perf_counter()
    sink = CliqueSink(collect)
    stats = SearchStats()
    meta: dict = {}
    common = dict(sink=sink, stats=stats, prune=prune, threads=threads, backend=backend)
    if order in ("degeneracy", "approx-degeneracy"):
        res = degeneracy_order(g) if order == "degeneracy" else approx_degeneracy_order(g, eps)
        dag = orient(g, res.order)
        store = build_communities(dag)
        probe = build_probe(dag, store, strategy=probe_strategy)
        meta = {"s" if order == "degeneracy" else "out_degree_bound": res.s,
                "gamma": store.gamma, "probe": probe.kind}
        run_degeneracy(dag, store, probe, k, **common)
    elif order == "hybrid":
        meta = {"eps": eps}
        run_hybrid(g, k, eps, probe_strategy=probe_strategy, **common)
    else:
        res = commdeg_order_greedy(g) if order == "commdeg" else approx_commdeg_order(g, eps)
        meta = {"sigma": res.sigma}
        if order == "approx-commdeg":
            meta["rounds"] = res.rounds
        run_commdeg(g, res.edge_order, k, **common)
    elapsed = (time.perf_counter() - start) * 1000
    cliques = sink.canonical() if collect else None
    return CliqueResult(k, sink.count, order, stats, meta, cliques, elapsed)
