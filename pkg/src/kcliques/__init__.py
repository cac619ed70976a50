"""Parallel k-clique listing and counting for sparse graphs."""

from .community import build_communities, build_probe, count_triangles, restricted_community
from .graph import Graph, OrientedGraph, VertexOrder, induced_subgraph, load_edge_list, orient, read_graph
from .listing import (
    ORDERS,
    CliqueSink,
    SearchStats,
    count_cliques,
    recursive_count,
    relevant_pairs,
    run_commdeg,
    run_degeneracy,
    run_hybrid,
)
from .ordering import approx_commdeg_order, approx_degeneracy_order, commdeg_order_greedy, degeneracy_order

__version__ = "0.1.0"
