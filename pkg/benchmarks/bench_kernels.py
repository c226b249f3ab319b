#!/usr/bin/env python3
"""Benchmark the compiled CSR kernels against the numpy/scipy fallback.

Times each kernel on preferential-attachment graphs of growing size and
prints a side-by-side table. Run from the repo root:

    python benchmarks/bench_kernels.py [--sizes 10000,100000,1000000]
"""

import argparse
import time

import numpy as np

from popnet import _kernels
from popnet.graph import Graph
from popnet.sgc import SGCConfig, generate_masses


def build_graph(n, m=4, seed=1):
    cfg = SGCConfig(masses_count=n, ba_m=m, seed=seed)
    frag = generate_masses(cfg, np.random.default_rng(seed))
    return Graph.from_edges(np.concatenate(frag.edge_blocks), n)


def timeit(fn, reps):
    best = float("inf")
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench(g, impl, reps):
    n = g.node_count
    rng = np.random.default_rng(0)
    x = rng.random(n)
    block = rng.random((n, 4))
    keep = rng.random(n) < 0.5
    rows = np.repeat(np.arange(n, dtype=np.int64), np.diff(g.indptr))
    out = {
        "matvec": timeit(lambda: impl.matvec(g.indptr, g.indices, x, rows), reps),
        "matmat4": timeit(lambda: impl.matmat(g.indptr, g.indices, block, rows), reps),
        "components": timeit(lambda: impl.components(g.indptr, g.indices), reps),
        "induce": timeit(lambda: impl.induce(g.indptr, g.indices, keep), reps),
        "bfs": timeit(lambda: impl.bfs_levels(g.indptr, g.indices, 0, -1), reps),
    }
    if n <= 4000:
        out["closeness"] = timeit(
            lambda: impl.closeness_sums(g.indptr, g.indices), max(1, reps // 3))
        out["betweenness"] = timeit(
            lambda: impl.betweenness(g.indptr, g.indices), max(1, reps // 3))
    return out


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="2000,50000,500000",
                        help="comma list of node counts")
    parser.add_argument("--reps", type=int, default=5)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    impls = _kernels.IMPLEMENTATIONS
    if "c" not in impls:
        print("note: compiled backend unavailable, timing fallback only")

    for n in sizes:
        g = build_graph(n)
        print(f"\n== {n:,} nodes, {g.edge_count:,} edges ==")
        results = {name: bench(g, impl, args.reps)
                   for name, impl in sorted(impls.items())}
        kernels_timed = results[next(iter(results))].keys()
        header = f"{'kernel':<12}" + "".join(f"{name:>12}" for name in sorted(results))
        if len(results) == 2:
            header += f"{'speedup':>10}"
        print(header)
        for kern in kernels_timed:
            line = f"{kern:<12}"
            for name in sorted(results):
                line += f"{results[name][kern] * 1000:>10.2f}ms"
            if len(results) == 2:
                ratio = results["py"][kern] / max(results["c"][kern], 1e-12)
                line += f"{ratio:>9.1f}x"
            print(line)


if __name__ == "__main__":
    main()
