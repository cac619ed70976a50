import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kcliques.community import (
    HashProbe,
    LocalGraph,
    MatrixProbe,
    build_communities,
    build_probe,
    count_triangles,
    merge_intersect,
    restricted_community,
)
from kcliques.generators import complete_graph, hypercube, k6_minus_edge, random_graph
from kcliques.graph import VertexOrder, orient
from kcliques.oracle import brute_force_triangles
from kcliques.ordering import commdeg_order_greedy, degeneracy_order


def test_merge_intersect():
    assert merge_intersect([1, 3, 5, 7], [2, 3, 4, 7, 9]) == [3, 7]
    assert merge_intersect([], [1]) == []


def test_k6_minus_edge_communities():
    dag = orient(k6_minus_edge(), VertexOrder.identity(6))
    store = build_communities(dag)
    assert store.triangles == 16
    assert store.gamma == 4
    # C(v1, v6) = {v2, v3, v4, v5}
    eid = dag.edge_id(0, 5)
    assert store.lists[eid] == [1, 2, 3, 4]
    # C(v3, v5) would be {v4}, but v3-v4 is missing
    assert store.lists[dag.edge_id(2, 4)] == []


def test_communities_of_complete_graph():
    dag = orient(complete_graph(5), VertexOrder.identity(5))
    store = build_communities(dag)
    for eid, u, v in dag.edges():
        assert store.lists[eid] == list(range(u + 1, v))


def test_hypercube_has_no_triangles():
    assert count_triangles(hypercube(4)) == 0


@settings(max_examples=60, deadline=None)
@given(st.integers(3, 20), st.sampled_from([0.2, 0.5, 0.8]), st.integers(0, 999))
def test_communities_partition_triangles(n, p, seed):
    g = random_graph(n, p, seed)
    dag = orient(g, degeneracy_order(g).order)
    store = build_communities(dag)
    T = brute_force_triangles(g)
    assert store.triangles == T == count_triangles(g)
    for eid, u, v in dag.edges():
        expect = sorted(dag.out_sets[u] & {w for w in range(dag.n) if v in dag.out_sets[w]})
        assert store.lists[eid] == expect
        assert all(u < w < v for w in store.lists[eid])


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 18), st.sampled_from([0.3, 0.6, 0.9]), st.integers(0, 999))
def test_restricted_community_subset(n, p, seed):
    g = random_graph(n, p, seed)
    order = commdeg_order_greedy(g).edge_order
    adj = g.adj_sets
    for e in range(g.m):
        u, v = (int(x) for x in g.edge_array[e])
        rc = restricted_community(g, e, order)
        assert set(rc) <= adj[u] & adj[v]


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 20), st.sampled_from([0.2, 0.5, 0.9]), st.integers(0, 999))
def test_matrix_and_hash_probes_agree(n, p, seed):
    g = random_graph(n, p, seed)
    dag = orient(g, degeneracy_order(g).order)
    store = build_communities(dag)
    mp, hp = MatrixProbe(dag, store), HashProbe(dag)
    for u in range(dag.n):
        for v in range(dag.n):
            assert mp.edge_id(u, v) == hp.edge_id(u, v)
            assert mp.has_edge(u, v) == hp.has_edge(u, v)
    for eid, _, _ in dag.edges():
        local = mp.scope(eid)
        members = store.lists[eid]
        for a in range(len(local)):
            for b in range(len(local)):
                assert local.has_edge(a, b) == hp.has_edge(members[a], members[b])


def test_local_graph_community_bitsets():
    dag = orient(complete_graph(5), VertexOrder.identity(5))
    local = LocalGraph.induced(dag.out_sets, [0, 1, 2, 3, 4])
    assert local.community(0, 4) == 0b01110
    assert local.cols[4] == 0b01111


def test_build_probe_selection():
    g = random_graph(20, 0.5, 1)
    dag = orient(g, degeneracy_order(g).order)
    store = build_communities(dag)
    assert build_probe(dag, store).kind == "matrix"
    assert build_probe(dag, store, threshold=0).kind == "hash"
    assert build_probe(dag, store, strategy="hash").kind == "hash"
    with pytest.raises(ValueError):
        build_probe(dag, store, strategy="nope")
