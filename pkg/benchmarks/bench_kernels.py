"""Timing comparison between the pure Python kernels and the compiled ones.

Runs the same workloads through both backends, checks that the outputs
are bit-for-bit identical, and prints per-call timings plus the speedup.
The pure module is always importable; the compiled one is skipped with a
note when the extension was not built.

Usage:
    python3 benchmarks/bench_kernels.py [--seed N] [--repeat N]
"""

import argparse
import random
import time

import numpy as np

from sidewalk_access._kernels import pure

try:
    from sidewalk_access._kernels import _native as native
except ImportError:
    native = None


def best_of(fn, repeat):
    """Best wall-clock time of `repeat` runs, in seconds."""
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def random_csr(rng, n, extra_arcs):
    """Connected random digraph in CSR form (a ring plus chords)."""
    arcs = []
    for u in range(n):
        arcs.append((u, (u + 1) % n, rng.uniform(1.0, 50.0)))
    for _ in range(extra_arcs):
        u = rng.randrange(n)
        v = rng.randrange(n)
        if u != v:
            arcs.append((u, v, rng.uniform(1.0, 80.0)))
    arcs.sort()
    indptr = np.zeros(n + 1, dtype=np.int64)
    for u, _, _ in arcs:
        indptr[u + 1] += 1
    indptr = np.cumsum(indptr)
    indices = np.array([v for _, v, _ in arcs], dtype=np.int64)
    weights = np.array([w for _, _, w in arcs], dtype=np.float64)
    return indptr, indices, weights


def bench_haversine(rng, repeat):
    pairs = [
        (
            rng.uniform(-85, 85), rng.uniform(-180, 180),
            rng.uniform(-85, 85), rng.uniform(-180, 180),
        )
        for _ in range(50_000)
    ]

    def run(mod):
        return [mod.haversine_m(*p) for p in pairs]

    assert run(pure) == run(native)
    return (
        "haversine_m x50k",
        best_of(lambda: run(pure), repeat),
        best_of(lambda: run(native), repeat),
    )


def bench_nearest_segment(rng, repeat):
    n = 800
    ax = np.array([rng.uniform(0, 1000) for _ in range(n)])
    ay = np.array([rng.uniform(0, 1000) for _ in range(n)])
    bx = ax + np.array([rng.uniform(-40, 40) for _ in range(n)])
    by = ay + np.array([rng.uniform(-40, 40) for _ in range(n)])
    queries = [(rng.uniform(0, 1000), rng.uniform(0, 1000)) for _ in range(300)]

    def run(mod):
        return [mod.nearest_segment(px, py, ax, ay, bx, by) for px, py in queries]

    assert run(pure) == run(native)
    return (
        "nearest_segment 300x800",
        best_of(lambda: run(pure), repeat),
        best_of(lambda: run(native), repeat),
    )


def bench_dijkstra(rng, repeat):
    n = 3_000
    indptr, indices, weights = random_csr(rng, n, 4 * n)
    h = np.zeros(n, dtype=np.float64)
    sources = [rng.randrange(n) for _ in range(20)]

    def run(mod):
        return [mod.dijkstra_dist(indptr, indices, weights, h, s, -1) for s in sources]

    for a, b in zip(run(pure), run(native)):
        assert np.asarray(a).tobytes() == np.asarray(b).tobytes()
    return (
        "dijkstra_dist 20x3k nodes",
        best_of(lambda: run(pure), repeat),
        best_of(lambda: run(native), repeat),
    )


def bench_kemeny(rng, repeat):
    m = 9
    tables = []
    for _ in range(10):
        P = [[0] * m for _ in range(m)]
        for _ in range(40):
            order = list(range(m))
            rng.shuffle(order)
            for i in range(m):
                for j in range(i + 1, m):
                    # order[i] beats order[j]: a vote against ranking j above i
                    P[order[j]][order[i]] += 1
        tables.append(P)

    def run(mod):
        return [mod.kemeny(P) for P in tables]

    assert run(pure) == run(native)
    return (
        "kemeny 10x m=9",
        best_of(lambda: run(pure), repeat),
        best_of(lambda: run(native), repeat),
    )


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=12345)
    ap.add_argument("--repeat", type=int, default=3,
                    help="runs per workload, best time wins (default 3)")
    args = ap.parse_args()

    if native is None:
        print("compiled extension not importable; nothing to compare")
        print("pure backend works, build the extension with: pip install -e .")
        return

    rng = random.Random(args.seed)
    rows = [
        bench_haversine(rng, args.repeat),
        bench_nearest_segment(rng, args.repeat),
        bench_dijkstra(rng, args.repeat),
        bench_kemeny(rng, args.repeat),
    ]

    name_w = max(len(r[0]) for r in rows)
    print(f"{'workload':<{name_w}}  {'pure':>10}  {'native':>10}  {'speedup':>8}")
    for name, t_pure, t_native in rows:
        print(
            f"{name:<{name_w}}  {t_pure * 1e3:>8.1f}ms  {t_native * 1e3:>8.1f}ms"
            f"  {t_pure / t_native:>7.1f}x"
        )
    print("\nall outputs matched bitwise across backends")


if __name__ == "__main__":
    main()
