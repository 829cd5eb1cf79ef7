"""Seeded Barabási–Albert router topologies."""

from __future__ import annotations

import random
from dataclasses import dataclass

from fogtopo.model import Topology, TopologyError


@dataclass(frozen=True)
class GeneratorParams:
    router_count: int
    attachment_edges: int = 2
    seed: int = 0
    latency_range: tuple[float, float] = (0.5, 2.5)
    bandwidth_range: tuple[float, float] = (100.0, 1000.0)
    as_id: int = 0

    def validate(self) -> None:
        if self.router_count < 1:
            raise TopologyError(f"router_count must be positive, got {self.router_count}")
        if self.attachment_edges < 1:
            raise TopologyError(f"attachment_edges must be positive, got {self.attachment_edges}")
        if self.attachment_edges >= self.router_count:
            raise TopologyError(
                f"attachment_edges ({self.attachment_edges}) must be < "
                f"router_count ({self.router_count})"
            )
        if not 0 <= self.seed < 2**64:
            raise TopologyError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        for name in ("latency_range", "bandwidth_range"):
            lo, hi = getattr(self, name)
            if not 0 < lo <= hi:
                raise TopologyError(f"{name} must satisfy 0 < min <= max, got ({lo}, {hi})")

    def as_dict(self) -> dict:
        return {
            "router_count": self.router_count,
            "attachment_edges": self.attachment_edges,
            "seed": self.seed,
            "latency_range": list(self.latency_range),
            "bandwidth_range": list(self.bandwidth_range),
            "as_id": self.as_id,
        }


def generate_barabasi_albert(params: GeneratorParams) -> Topology:
    """Grow a preferential-attachment graph from a clique of ``m + 1`` routers.

    Each later router links to ``m`` distinct existing routers drawn with
    probability proportional to their current degree. Router ids are
    ``0..n-1``; link weights are uniform over the configured ranges.
    """
    params.validate()
    n, m = params.router_count, params.attachment_edges
    rng = random.Random(params.seed)
    lat_lo, lat_hi = params.latency_range
    bw_lo, bw_hi = params.bandwidth_range

    topo = Topology()
    for r in range(n):
        topo.add_router(r, params.as_id)

    # every router appears once per incident link
    endpoints: list[int] = []

    def link(a: int, b: int) -> None:
        topo.add_link(a, b, rng.uniform(lat_lo, lat_hi), rng.uniform(bw_lo, bw_hi))
        endpoints.append(a)
        endpoints.append(b)

    seed_size = min(m + 1, n)
    for a in range(seed_size):
        for b in range(a + 1, seed_size):
            link(a, b)

    for new in range(seed_size, n):
        targets: list[int] = []
        while len(targets) < m:
            t = rng.choice(endpoints)
            if t not in targets:
                targets.append(t)
        for t in targets:
            link(new, t)
    return topo
