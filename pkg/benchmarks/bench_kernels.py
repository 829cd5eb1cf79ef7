"""Compare the compiled and pure-Python kernel backends.

Each kernel and the two end-to-end stages run under every available backend on
the same generated topology. The median wall time per backend and the
python/compiled ratio are printed as a table.

Usage::

    python benchmarks/bench_kernels.py --size 2000 --repeat 5
"""

from __future__ import annotations

import argparse
import logging
import statistics
import time
from typing import Callable

import numpy as np

from fogtopo import kernels
from fogtopo.classify import classify
from fogtopo.config import DEFAULT_FOG_CONFIG
from fogtopo.ingest import GeneratorParams, generate_barabasi_albert
from fogtopo.placement import place_fog_nodes

log = logging.getLogger("bench_kernels")


def _median_ms(fn: Callable[[], object], repeat: int) -> float:
    fn()  # warm-up
    samples = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        samples.append((time.perf_counter() - t0) * 1e3)
    return statistics.median(samples)


def build_cases(size: int, seed: int, threshold: float) -> dict[str, Callable[[], object]]:
    """Benchmark closures keyed by name, all sharing one pre-built topology."""
    topo = generate_barabasi_albert(GeneratorParams(size, 2, seed))
    g = topo.csr(intra_as=True)
    cls = classify(topo)
    n = len(g.ids)
    rng = np.random.default_rng(seed)
    sources = rng.choice(n, size=min(n, 200), replace=False).astype(np.int64)
    in_b = np.zeros(n, dtype=np.uint8)
    in_b[rng.choice(n, size=max(1, n // 10), replace=False)] = 1
    cfg = DEFAULT_FOG_CONFIG.with_threshold(threshold)
    caps = [t.max_clients for t in cfg.node_types]
    costs = [t.cost for t in cfg.node_types]

    def dijkstra() -> None:
        for s in sources[:50].tolist():
            kernels.bounded_dijkstra(g, s, threshold)

    def counts() -> None:
        kernels.ball_counts(g, sources, threshold, np.zeros(n, dtype=np.int64), 1)

    def backbone() -> None:
        b = in_b.copy()
        visited = np.zeros(n, dtype=np.uint8)
        parent = np.full(n, -1, dtype=np.int64)
        for root in range(n):
            if not visited[root]:
                kernels.connect_backbone(g, root, b, visited, parent)

    return {
        "bounded_dijkstra x50": dijkstra,
        "ball_counts x200": counts,
        "connect_backbone": backbone,
        "min_cost_cover d=2000": lambda: kernels.min_cost_cover(caps, costs, 2000),
        "classify": lambda: classify(topo),
        f"place T={threshold:g}": lambda: place_fog_nodes(topo, cls, cfg),
    }


def main(argv: list[str] | None = None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--size", type=int, default=2000, help="router count")
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--threshold", type=float, default=4.0, help="latency bound in ms")
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    backends = kernels.available_backends()
    if "compiled" not in backends:
        log.warning("compiled backend unavailable; only the pure-Python timings are shown")
    cases = build_cases(args.size, args.seed, args.threshold)
    results: dict[str, dict[str, float]] = {name: {} for name in cases}
    for b in backends:
        with kernels.using(b):
            for name, fn in cases.items():
                results[name][b] = _median_ms(fn, args.repeat)

    header = f"{'case':<24}" + "".join(f"{b + ' ms':>14}" for b in backends) + f"{'ratio':>10}"
    print(f"routers={args.size} repeat={args.repeat} (median wall time)")
    print(header)
    for name, row in results.items():
        ratio = row["python"] / row["compiled"] if "compiled" in row and row["compiled"] > 0 else float("nan")
        print(f"{name:<24}" + "".join(f"{row[b]:>14.3f}" for b in backends) + f"{ratio:>10.1f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
