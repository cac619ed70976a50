"""Command-line interface.

    kcliques count GRAPH -k 5 [--order degeneracy] [--mode list -o out.txt] [--verify]
    kcliques stats GRAPH
    kcliques bench GRAPH... -k 4 5 --threads 1 2 -o bench.csv
    kcliques generate collab -o collab.txt
    kcliques convert graph.txt graph.bin

Exit codes: 0 ok, 1 verification or determinism mismatch, 2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

from . import generators
from .community import build_communities
from .graph import EdgeListError, orient, read_graph, save_binary, write_edge_list
from .listing import ORDERS, count_cliques
from .oracle import MAX_BRUTE_FORCE_N, brute_force_cliques
from .ordering import (
    approx_commdeg_order,
    approx_degeneracy_order,
    commdeg_order_greedy,
    degeneracy_order,
    write_order,
)

log = logging.getLogger("kcliques")

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2

BENCH_FIELDS = ["graph", "order", "k", "threads", "prune", "count", "elapsed_ms", "recursive_calls", "probes"]


class UsageError(Exception):
    pass


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError("must be > 0")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _load(path: str):
    try:
        return read_graph(path)
    except (OSError, EdgeListError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def cmd_count(args) -> int:
    if args.mode == "list" and not args.output:
        raise UsageError("--mode list needs --output")
    g = _load(args.input)
    if args.verify and g.n > MAX_BRUTE_FORCE_N:
        raise UsageError(f"--verify refuses graphs with n > {MAX_BRUTE_FORCE_N} (n={g.n})")
    result = count_cliques(
        g,
        args.k,
        order=args.order,
        eps=args.epsilon,
        threads=args.threads,
        prune=args.prune,
        collect=args.mode == "list" or args.verify,
        backend=args.backend,
        probe_strategy=args.probe,
    )
    report = result.as_dict()
    report["threads"] = args.threads
    report["prune"] = args.prune
    if args.mode == "list":
        with open(args.output, "w") as fh:
            for clique in result.cliques:
                fh.write(" ".join(map(str, clique)) + "\n")
    if args.save_order:
        _save_order(g, args.order, args.epsilon, args.save_order)
    status = EXIT_OK
    if args.verify:
        expected = brute_force_cliques(g, args.k)
        report["verified"] = expected == result.cliques
        if not report["verified"]:
            log.error("engine and oracle disagree: %d vs %d cliques", result.count, len(expected))
            status = EXIT_MISMATCH
    print(json.dumps(report))
    return status


def _save_order(g, order: str, eps: float, path: str) -> None:
    """Recompute (deterministically) and write the order the run used."""
    if order == "degeneracy":
        used = degeneracy_order(g).order
    elif order in ("approx-degeneracy", "hybrid"):
        used = approx_degeneracy_order(g, eps).order
    elif order == "commdeg":
        used = commdeg_order_greedy(g).edge_order
    else:
        used = approx_commdeg_order(g, eps).edge_order
    with open(path, "w") as fh:
        write_order(used, fh)


def graph_stats(g) -> dict:
    deg = degeneracy_order(g)
    store = build_communities(orient(g, deg.order))
    return {
        "n": g.n,
        "m": g.m,
        "T": store.triangles,
        "s": deg.s,
        "sigma": commdeg_order_greedy(g).sigma,
        "max_community": store.gamma,
    }


def cmd_stats(args) -> int:
    print(json.dumps(graph_stats(_load(args.input))))
    return EXIT_OK


def bench_rows(graphs, orders, ks, thread_counts, repetitions=10, prune_modes=(True,), eps=0.5, backend="process"):
    """Yield one averaged CSV row per (graph, order, k, prune, threads)."""
    for name, g in graphs:
        for order in orders:
            for k in ks:
                for prune in prune_modes:
                    counts = set()
                    for threads in thread_counts:
                        runs = [
                            count_cliques(g, k, order=order, eps=eps, threads=threads, prune=prune, backend=backend)
                            for _ in range(repetitions)
                        ]
                        counts.update(r.count for r in runs)
                        if len(counts) != 1:
                            raise RuntimeError(f"counts differ across runs for {name} {order} k={k}: {sorted(counts)}")
                        last = runs[-1]
                        yield {
                            "graph": name,
                            "order": order,
                            "k": k,
                            "threads": threads,
                            "prune": "on" if prune else "off",
                            "count": last.count,
                            "elapsed_ms": round(sum(r.elapsed_ms for r in runs) / len(runs), 3),
                            "recursive_calls": last.stats.recursive_calls,
                            "probes": last.stats.edge_probes,
                        }


def cmd_bench(args) -> int:
    graphs = [(Path(p).stem, _load(p)) for p in args.inputs]
    prune_modes = {"on": (True,), "off": (False,), "both": (True, False)}[args.prune]
    out = open(args.output, "w", newline="") if args.output else sys.stdout
    try:
        writer = csv.DictWriter(out, fieldnames=BENCH_FIELDS)
        writer.writeheader()
        try:
            for row in bench_rows(graphs, args.orders, args.k, args.threads, args.repetitions,
                                  prune_modes, args.epsilon, args.backend):
                writer.writerow(row)
                out.flush()
        except RuntimeError as exc:
            log.error("%s", exc)
            return EXIT_MISMATCH
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def cmd_generate(args) -> int:
    kind = args.kind
    if kind == "collab":
        g = generators.collaboration_graph(seed=args.seed)
    elif kind == "gnp":
        g = generators.random_graph(args.n, args.p, args.seed)
    elif kind == "complete":
        g = generators.complete_graph(args.n)
    elif kind == "hypercube":
        g = generators.hypercube(args.n)
    elif kind == "star":
        g = generators.star_graph(args.n)
    else:
        g = generators.k6_minus_edge()
    with open(args.output, "w") as fh:
        write_edge_list(g, fh)
    return EXIT_OK


def cmd_convert(args) -> int:
    g = _load(args.input)
    with open(args.output, "wb") as fh:
        save_binary(g, fh)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kcliques", description=__doc__.split("\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def engine_flags(p):
        p.add_argument("--epsilon", type=_positive_float, default=0.5)
        p.add_argument("--backend", choices=("process", "thread"), default="process")

    p = sub.add_parser("count", help="count or list k-cliques")
    p.add_argument("input")
    p.add_argument("-k", type=_positive_int, required=True)
    p.add_argument("--order", choices=ORDERS, default="degeneracy")
    p.add_argument("--threads", type=_positive_int, default=1)
    p.add_argument("--mode", choices=("count", "list"), default="count")
    p.add_argument("--no-prune", dest="prune", action="store_false")
    p.add_argument("--verify", action="store_true", help="compare against brute force (n <= 30)")
    p.add_argument("--probe", choices=("auto", "matrix", "hash"), default="auto")
    p.add_argument("-o", "--output", help="clique output file (list mode)")
    p.add_argument("--save-order", help="write the vertex (or edge) order used")
    engine_flags(p)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("stats", help="n, m, T, s, sigma, largest community")
    p.add_argument("input")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("bench", help="timing CSV over orders, k and thread counts")
    p.add_argument("inputs", nargs="+")
    p.add_argument("-k", type=_positive_int, nargs="+", required=True)
    p.add_argument("--orders", nargs="+", choices=ORDERS, default=["degeneracy"])
    p.add_argument("--threads", type=_positive_int, nargs="+", default=[1])
    p.add_argument("--repetitions", type=_positive_int, default=10)
    p.add_argument("--prune", choices=("on", "off", "both"), default="on")
    p.add_argument("-o", "--output")
    engine_flags(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("generate", help="write a generated graph as an edge list")
    p.add_argument("kind", choices=("collab", "gnp", "complete", "hypercube", "star", "k6-minus-edge"))
    p.add_argument("-n", type=int, default=20)
    p.add_argument("-p", type=float, default=0.3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("convert", help="write the binary graph cache")
    p.add_argument("input")
    p.add_argument("output")
    p.set_defaults(func=cmd_convert)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"kcliques: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"kcliques: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
