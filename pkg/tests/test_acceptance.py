"""Acceptance suite: one test per criterion, each recording a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py``; the lines appear in the
"acceptance criteria" section of the terminal summary.
"""

import time
from math import comb

import pytest

from kcliques.community import build_communities, restricted_community
from kcliques.generators import (
    collaboration_graph,
    complete_graph,
    hypercube,
    k6_minus_edge,
    random_corpus,
    random_graph,
    star_graph,
)
from kcliques.graph import orient
from kcliques.listing import ORDERS, count_cliques, relevant_pairs
from kcliques.oracle import (
    brute_force_relevant_pairs,
    brute_force_triangles,
    clique_counts_by_size,
    exact_community_degeneracy,
    exact_degeneracy,
)
from kcliques.ordering import approx_commdeg_order, approx_degeneracy_order, round_bound

EPSILONS = (0.1, 0.5, 1.0)


@pytest.fixture(scope="module")
def corpus():
    return random_corpus(200)


@pytest.fixture(scope="module")
def truth(corpus):
    return [clique_counts_by_size(g) for _, g in corpus]


def test_criterion_1_golden_k6_minus_edge(criterion):
    g = k6_minus_edge()
    bad, slowest = [], 0.0
    for order in ORDERS:
        start = time.perf_counter()
        got = (count_cliques(g, 5, order=order).count, count_cliques(g, 6, order=order).count)
        slowest = max(slowest, time.perf_counter() - start)
        if got != (2, 0):
            bad.append((order, got))
    ok = not bad and slowest < 1.0
    criterion(1, ok, f"K6-minus-edge k=5 -> 2, k=6 -> 0 for {len(ORDERS)} orders; slowest {slowest * 1000:.1f} ms; bad={bad}")
    assert ok


def test_criterion_2_oracle_equivalence(criterion, corpus, truth):
    start = time.perf_counter()
    mismatches, checked = [], 0
    for (name, g), counts in zip(corpus, truth):
        for k in range(3, g.n + 1):
            for order in ORDERS:
                got = count_cliques(g, k, order=order).count
                checked += 1
                if got != counts.get(k, 0):
                    mismatches.append((name, k, order, got, counts.get(k, 0)))
    elapsed = time.perf_counter() - start
    ok = not mismatches and elapsed < 300
    criterion(2, ok, f"{checked} (graph, k, order) runs on {len(corpus)} graphs, "
                     f"{len(mismatches)} mismatches, {elapsed:.1f} s")
    assert ok, mismatches[:5]


def test_criterion_3_structural_facts(criterion, corpus):
    named = [("star", star_graph(6)), ("Q3", hypercube(3)), ("Q4", hypercube(4)),
             ("K6", complete_graph(6)), ("k6-minus-edge", k6_minus_edge())]
    failures = []
    if exact_degeneracy(star_graph(6)) != 1:
        failures.append("star s")
    for d in (3, 4):
        q = hypercube(d)
        if (exact_degeneracy(q), exact_community_degeneracy(q)) != (d, 0):
            failures.append(f"Q{d}")
    graphs = named + list(corpus)
    nonempty = 0
    for name, g in graphs:
        s, sigma, T = exact_degeneracy(g), exact_community_degeneracy(g), brute_force_triangles(g)
        if g.m > 0:
            nonempty += 1
            if not sigma < s:
                failures.append(f"{name}: sigma={sigma} s={s}")
        if T > sigma * g.m:
            failures.append(f"{name}: T={T} > sigma*m={sigma * g.m}")
    ok = not failures
    criterion(3, ok, f"star s=1, Q3/Q4 s=d sigma=0; sigma<s on {nonempty} graphs; "
                     f"T<=sigma*m on {len(graphs)} graphs; failures={failures[:3]}")
    assert ok


def test_criterion_4_relevant_pairs(criterion):
    bad = []
    for size in range(1, 61):
        I = list(range(0, 3 * size, 3))
        for c in range(0, 13):
            expected = comb(size - c, 2) if size > c + 1 else 0
            it = sum(1 for _ in relevant_pairs(I, c))
            if not it == expected == brute_force_relevant_pairs(I, c):
                bad.append((size, c, it, expected))
    ok = not bad
    criterion(4, ok, f"|I| in [1,60] x c in [0,12]: iterator = closed form = pair scan; bad={bad[:3]}")
    assert ok


def test_criterion_5_approximation_quality(criterion):
    graphs = [random_graph(5 + i % 20, round(0.1 * (1 + (i * 4) % 9), 1), 50_000 + i) for i in range(100)]
    bad = []
    worst_deg = worst_rc = 0.0
    for i, g in enumerate(graphs):
        s, sigma = exact_degeneracy(g), exact_community_degeneracy(g)
        for eps in EPSILONS:
            deg = approx_degeneracy_order(g, eps)
            if deg.s > (2 + 2 * eps) * s:
                bad.append((i, eps, "deg", deg.s, s))
            if s:
                worst_deg = max(worst_deg, deg.s / s)
            cd = approx_commdeg_order(g, eps)
            rc = max((len(restricted_community(g, e, cd.edge_order)) for e in range(g.m)), default=0)
            if rc > (3 + eps) * sigma:
                bad.append((i, eps, "comm", rc, sigma))
            if cd.rounds > round_bound(g.m, eps):
                bad.append((i, eps, "rounds", cd.rounds, round_bound(g.m, eps)))
            if sigma:
                worst_rc = max(worst_rc, rc / sigma)
    ok = not bad
    criterion(5, ok, f"100 graphs x eps {EPSILONS}: worst out-degree/s {worst_deg:.2f}, "
                     f"worst restricted-community/sigma {worst_rc:.2f}, rounds within bound; bad={bad[:3]}")
    assert ok


def test_criterion_6_pruning_monotonicity(criterion, corpus):
    bad, runs, saved = [], 0, 0
    for name, g in corpus:
        for k in range(3, g.n + 1):
            for order in ORDERS:
                on = count_cliques(g, k, order=order, prune=True)
                off = count_cliques(g, k, order=order, prune=False)
                runs += 1
                saved += off.stats.edge_probes - on.stats.edge_probes
                if (on.count != off.count
                        or off.stats.recursive_calls < on.stats.recursive_calls
                        or off.stats.edge_probes < on.stats.edge_probes):
                    bad.append((name, k, order))
    ok = not bad
    criterion(6, ok, f"{runs} runs: counts equal, calls/probes never lower without the filter "
                     f"({saved} probes saved in total); bad={bad[:3]}")
    assert ok


def test_criterion_7_parallel_determinism(criterion, corpus):
    bad, runs = [], 0
    for i, (name, g) in enumerate(corpus):
        for order in ORDERS:
            for k in range(3, g.n + 1):
                base = count_cliques(g, k, order=order).count
                for threads in (2, 4, 8):
                    runs += 1
                    if count_cliques(g, k, order=order, threads=threads, backend="thread").count != base:
                        bad.append((name, order, k, threads, "thread"))
            if order != "degeneracy" and i % 4:
                continue
            k = min(g.n, 4)
            base = count_cliques(g, k, order=order).count
            for threads in (2, 4, 8):
                runs += 1
                if count_cliques(g, k, order=order, threads=threads, backend="process").count != base:
                    bad.append((name, order, k, threads, "process"))

    big = collaboration_graph()
    timings = {}
    counts = set()
    for order in ORDERS:
        thread_counts = (1, 2, 4, 8) if order == "degeneracy" else (1, 8)
        for threads in thread_counts:
            start = time.perf_counter()
            counts.add(count_cliques(big, 6, order=order, threads=threads).count)
            timings[(order, threads)] = time.perf_counter() - start
    slowest = max(timings.values())
    ok = not bad and len(counts) == 1 and slowest < 60
    criterion(7, ok, f"corpus: {runs} multi-worker runs agree; collaboration graph "
                     f"(n={big.n}, m={big.m}) k=6 count {sorted(counts)} over {len(timings)} "
                     f"(order, threads) runs, slowest {slowest:.1f} s; bad={bad[:3]}")
    assert ok


def test_criterion_8_uniqueness(criterion, corpus):
    bad, listed = [], 0
    cases = [("k6-minus-edge", k6_minus_edge())] + list(corpus)
    for name, g in cases:
        for k in range(3, g.n + 1):
            for order in ORDERS:
                res = count_cliques(g, k, order=order, collect=True)
                listed += len(res.cliques)
                if len(set(res.cliques)) != len(res.cliques) or len(res.cliques) != res.count:
                    bad.append((name, k, order))
    ok = not bad
    criterion(8, ok, f"{listed} cliques listed over {len(cases)} graphs, all orders and k: "
                     f"no duplicates; bad={bad[:3]}")
    assert ok
