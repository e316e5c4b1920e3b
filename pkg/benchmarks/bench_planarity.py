"""Compare the compiled and pure-Python Kuratowski search kernels.

    python3 benchmarks/bench_planarity.py [--random N] [--skip-slow]

Each graph is reduced once, then both kernels run the same subdivision
search; their verdicts must agree.
"""

from __future__ import annotations

import argparse
import random
import time

import networkx as nx

from ecomini import planarity


def _masks(edges):
    adj = planarity.reduce_graph(planarity.simple_edges(edges))
    index = {v: i for i, v in enumerate(sorted(adj))}
    masks = [0] * len(adj)
    for v, nbrs in adj.items():
        for u in nbrs:
            masks[index[v]] |= 1 << index[u]
    return len(adj), masks


def _time(kernel, n, masks, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        verdict = kernel(n, masks)
        best = min(best, time.perf_counter() - t)
    return verdict, best


def workload(random_graphs: int, skip_slow: bool):
    cases = [
        ("K5", nx.complete_graph(5)),
        ("K3,3", nx.complete_bipartite_graph(3, 3)),
        ("Petersen", nx.petersen_graph()),
        ("K6 minus matching", nx.complement(nx.Graph([(0, 1), (2, 3), (4, 5)]))),
        ("cube + diagonal", nx.Graph(list(nx.hypercube_graph(3).edges()) + [((0, 0, 0), (1, 1, 1))])),
    ]
    if not skip_slow:
        cases.append(("icosahedron", nx.icosahedral_graph()))
    rng = random.Random(7)
    for i in range(random_graphs):
        cases.append((f"G(12, 0.35) #{i}", nx.gnp_random_graph(12, 0.35, seed=rng.randrange(10**9))))
    for name, g in cases:
        g = nx.convert_node_labels_to_integers(g)
        yield name, list(g.edges())


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--random", type=int, default=10, help="number of random 12-vertex graphs")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--skip-slow", action="store_true", help="leave out the icosahedron")
    args = ap.parse_args()
    if planarity.c_kernel is None:
        raise SystemExit("compiled kernel not built; reinstall without ECOMINI_NO_EXT")

    print(f"{'graph':<22}{'n':>4}{'verdict':>10}{'cython ms':>12}{'python ms':>12}{'speedup':>9}")
    tot_c = tot_py = 0.0
    for name, edges in workload(args.random, args.skip_slow):
        n, masks = _masks(edges)
        vc, tc = _time(planarity.c_kernel, n, masks, args.repeat)
        vp, tp = _time(planarity.py_kernel, n, masks, 1 if n >= 12 else args.repeat)
        assert vc == vp, name
        tot_c += tc
        tot_py += tp
        verdict = "nonplanar" if vc else "planar"
        print(f"{name:<22}{n:>4}{verdict:>10}{tc * 1e3:>12.3f}{tp * 1e3:>12.3f}{tp / max(tc, 1e-9):>8.1f}x")
    print(f"{'total':<36}{tot_c * 1e3:>12.3f}{tot_py * 1e3:>12.3f}{tot_py / max(tot_c, 1e-9):>8.1f}x")


if __name__ == "__main__":
    main()
