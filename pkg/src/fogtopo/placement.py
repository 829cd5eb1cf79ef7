"""Greedy latency-bounded fog node placement.

Each round, every router within the latency threshold of an uncovered edge
router is a candidate. A candidate's range is the uncovered edge routers it
reaches, its cost is the cheapest mix of node types whose capacity serves
that range's clients, and the candidate with the best coverage/cost ratio
is placed. Rounds repeat until every edge router is covered.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from fogtopo import kernels
from fogtopo.config import FogConfig, FogNodeType
from fogtopo.model import RouterClassification, Topology, TopologyError

TIE_RTOL = 1e-9


class PlacementError(RuntimeError):
    """Placement stopped before every edge router was covered."""

    def __init__(self, message: str, uncovered: list[int], partial: "Placement"):
        super().__init__(message)
        self.uncovered = uncovered
        self.partial = partial


@dataclass(frozen=True)
class Candidate:
    router: int
    range: frozenset[int]
    configuration: tuple[FogNodeType, ...]
    cost: float

    @property
    def coverage(self) -> int:
        return len(self.range)

    @property
    def ratio(self) -> float:
        return self.coverage / self.cost


@dataclass(frozen=True)
class IterationRecord:
    """Snapshot of one greedy round (recorded when ``trace=True``)."""

    iteration: int
    routers: np.ndarray
    coverage: np.ndarray
    cost: np.ndarray
    chosen: int
    chosen_range: tuple[int, ...]

    @property
    def n_candidates(self) -> int:
        return len(self.routers)


@dataclass
class Placement:
    assignments: dict[int, tuple[FogNodeType, ...]] = field(default_factory=dict)
    total_cost: float = 0.0
    covered_by: dict[int, int] = field(default_factory=dict)
    trace: list[IterationRecord] = field(default_factory=list, compare=False, repr=False)

    @property
    def node_count(self) -> int:
        return sum(len(c) for c in self.assignments.values())

    @property
    def node_types(self) -> list[FogNodeType]:
        seen = {t.name: t for cfg in self.assignments.values() for t in cfg}
        return [seen[name] for name in sorted(seen)]


def client_demand(coverage: int, edge_occupancy: float) -> int:
    """Clients behind ``coverage`` edge routers, rounded up."""
    raw = coverage * edge_occupancy
    # absorb float noise such as 10 * 0.7 == 7.000000000000001
    return max(0, math.ceil(raw - TIE_RTOL * max(1.0, raw)))


class CoverTable:
    """Exact min-cost covering configurations for every demand up to ``max_demand``.

    Ties on cost (relative 1e-9) go to fewer nodes, then to the multiset whose
    name-sorted type list is lexicographically smallest.
    """

    def __init__(self, node_types: tuple[FogNodeType, ...] | list[FogNodeType], max_demand: int):
        self.types = sorted(node_types, key=lambda t: t.name)
        self.max_demand = max(0, int(max_demand))
        self.cost, self.nodes = kernels.min_cost_cover(
            [t.max_clients for t in self.types], [t.cost for t in self.types], self.max_demand
        )

    def configuration(self, demand: int) -> tuple[tuple[FogNodeType, ...], float]:
        if demand > self.max_demand:
            raise ValueError(f"demand {demand} exceeds table size {self.max_demand}")
        cost, nodes = self.cost, self.nodes
        picked = []
        d = demand
        while d > 0:
            for t in self.types:
                prev = max(0, d - t.max_clients)
                c = cost[prev] + t.cost
                if abs(c - cost[d]) <= TIE_RTOL * max(1.0, abs(cost[d])) and nodes[prev] + 1 == nodes[d]:
                    picked.append(t)
                    d = prev
                    break
            else:  # pragma: no cover - table invariant
                raise AssertionError(f"no reconstruction step at demand {d}")
        return tuple(sorted(picked, key=lambda t: t.name)), float(cost[demand])


def optimal_configuration(
    demand_clients: int, node_types: tuple[FogNodeType, ...] | list[FogNodeType]
) -> tuple[tuple[FogNodeType, ...], float]:
    """Cheapest multiset of node types whose summed capacity covers ``demand_clients``."""
    if not node_types:
        raise ValueError("node_types must not be empty")
    if demand_clients < 1:
        raise ValueError(f"demand must be >= 1, got {demand_clients}")
    return CoverTable(node_types, demand_clients).configuration(demand_clients)


def bounded_latencies(
    topology: Topology, source: int, bound: float, cross_as_paths: bool = False
) -> dict[int, float]:
    """Shortest-path latency from ``source`` to every router within ``bound`` ms."""
    if source not in topology:
        raise TopologyError(f"unknown router {source}")
    if not bound > 0:
        raise ValueError(f"bound must be > 0, got {bound}")
    g = topology.csr(intra_as=not cross_as_paths)
    idx, dist = kernels.bounded_dijkstra(g, g.index[source], bound)
    order = np.argsort(idx, kind="stable")
    return dict(zip(g.ids[idx[order]].tolist(), dist[order].tolist()))


def _rank_key(c: Candidate) -> tuple:
    return (-c.ratio, -c.coverage, c.router)


def rank_candidates(candidates: list[Candidate]) -> list[Candidate]:
    """Best first: highest coverage/cost, then larger coverage, then lower router id."""
    return sorted(candidates, key=_rank_key)


def determine_candidates(
    topology: Topology,
    uncovered_edges: set[int] | frozenset[int],
    config: FogConfig,
    cross_as_paths: bool = False,
    eligible: set[int] | frozenset[int] | None = None,
) -> list[Candidate]:
    """All routers within the threshold of some uncovered edge router, with range and cost.

    Latency is measured outward from each edge router, so a router's range is
    exactly the set of edge routers whose ball contains it. ``eligible``
    restricts which routers may become candidates.
    """
    if not uncovered_edges:
        return []
    T = config.latency_threshold
    reach: dict[int, set[int]] = {}
    for a in sorted(uncovered_edges):
        for v in bounded_latencies(topology, a, T, cross_as_paths):
            if eligible is None or v in eligible:
                reach.setdefault(v, set()).add(a)
    table = CoverTable(config.node_types, client_demand(len(uncovered_edges), config.edge_occupancy))
    out = []
    for c in sorted(reach):
        rng = frozenset(reach[c])
        conf, cost = table.configuration(client_demand(len(rng), config.edge_occupancy))
        out.append(Candidate(c, rng, conf, cost))
    return out


class GreedyLatencyPolicy:
    """Default placement policy: greedy coverage/cost under a latency bound.

    Args:
        cross_as_paths: allow latency paths to leave the candidate's AS.
        edge_only: only edge routers may host fog nodes.
        trace: keep an :class:`IterationRecord` per round on the result.
    """

    def __init__(self, cross_as_paths: bool = False, edge_only: bool = False, trace: bool = False):
        self.cross_as_paths = cross_as_paths
        self.edge_only = edge_only
        self.trace = trace

    @staticmethod
    def _claim(g, f: int, T: float, uncovered: np.ndarray) -> list[int]:
        """Uncovered edge routers whose own ball contains ``f``.

        Balls are measured from the edge router, the direction ``counts`` was
        built in. Distances measured from ``f`` settle every router clearly
        inside or outside T; only those within float noise of T are re-run
        from their own side.
        """
        near, dist = kernels.bounded_dijkstra(g, f, T * (1 + 1e-9) + 1e-12)
        keep = uncovered[near]
        near, dist = near[keep], dist[keep]
        sure = dist < T * (1 - 1e-9)
        rng = near[sure].tolist()
        for a in near[~sure].tolist():
            ball, _ = kernels.bounded_dijkstra(g, a, T)
            if (ball == f).any():
                rng.append(a)
        return sorted(rng)

    @staticmethod
    def _saturated(g, labels: np.ndarray, comps: np.ndarray, T: float) -> np.ndarray:
        """Components in which every router pair is within ``T``.

        If all of a component lies within T/2 of one router, any two routers
        are within T of each other. The slack absorbs float summation error.
        """
        _, first = np.unique(labels, return_index=True)
        sizes = np.bincount(labels)
        out = []
        for c in comps.tolist():
            near, _ = kernels.bounded_dijkstra(g, int(first[c]), T / 2 * (1 - 1e-9))
            if len(near) == sizes[c]:
                out.append(c)
        return np.asarray(out, dtype=np.int64)

    def place(
        self, topology: Topology, classification: RouterClassification, config: FogConfig
    ) -> Placement:
        placement = Placement()
        edges = sorted(classification.edge)
        if not edges:
            return placement
        for r in edges:
            if r not in topology:
                raise TopologyError(f"classified edge router {r} is not in the topology")

        T = config.latency_threshold
        g = topology.csr(intra_as=not self.cross_as_paths)
        n = len(g)
        edge_idx = np.asarray([g.index[r] for r in edges], dtype=np.int64)
        uncovered = np.zeros(n, dtype=bool)
        uncovered[edge_idx] = True
        eligible = np.ones(n, dtype=bool)
        if self.edge_only:
            eligible[:] = False
            eligible[edge_idx] = True

        # counts[v] = number of uncovered edge routers whose ball contains v
        counts = np.zeros(n, dtype=np.int64)
        labels = g.component_labels()
        comp_uncovered = np.bincount(labels[edge_idx], minlength=labels.max() + 1)
        saturated = self._saturated(g, labels, np.flatnonzero(comp_uncovered), T)
        if saturated.size:
            is_sat = np.isin(labels, saturated)
            counts[is_sat] = comp_uncovered[labels[is_sat]]
            kernels.ball_counts(g, edge_idx[~is_sat[edge_idx]], T, counts, 1)
        else:
            kernels.ball_counts(g, edge_idx, T, counts, 1)

        table = CoverTable(config.node_types, client_demand(len(edges), config.edge_occupancy))
        demand_of = np.array(
            [client_demand(k, config.edge_occupancy) for k in range(len(edges) + 1)], dtype=np.int64
        )
        cost_of = table.cost[demand_of]
        cost_of[0] = np.inf

        remaining = len(edges)
        iteration = 0
        while remaining:
            cand = np.flatnonzero((counts > 0) & eligible)
            cov = counts[cand]
            cost = cost_of[cov]
            ratio = cov / cost
            best = cand[ratio == ratio.max()]
            best_cov = counts[best]
            f = int(best[best_cov == best_cov.max()][0])

            comp = labels == labels[f]
            if counts[f] == comp_uncovered[labels[f]]:
                # f reaches every uncovered edge router of its component
                rng = np.flatnonzero(uncovered & comp).tolist()
            else:
                rng = self._claim(g, f, T, uncovered)
            if len(rng) != counts[f]:  # pragma: no cover - consistency guard
                raise AssertionError(f"range of {f} has {len(rng)} routers, expected {counts[f]}")

            conf, conf_cost = table.configuration(int(demand_of[len(rng)]))
            if config.max_total_nodes is not None and placement.node_count + len(conf) > config.max_total_nodes:
                uncovered_ids = g.ids[uncovered].tolist()
                raise PlacementError(
                    f"max_total_nodes={config.max_total_nodes} reached with "
                    f"{len(uncovered_ids)} edge routers uncovered",
                    uncovered_ids,
                    placement,
                )
            if self.trace:
                placement.trace.append(
                    IterationRecord(
                        iteration,
                        g.ids[cand].copy(),
                        cov.copy(),
                        cost.copy(),
                        int(g.ids[f]),
                        tuple(g.ids[rng].tolist()),
                    )
                )

            router = int(g.ids[f])
            merged = placement.assignments.get(router, ()) + conf
            placement.assignments[router] = tuple(sorted(merged, key=lambda t: t.name))
            placement.total_cost += conf_cost
            for a in rng:
                placement.covered_by[int(g.ids[a])] = router
            uncovered[rng] = False
            comp_uncovered[labels[f]] -= len(rng)
            left = comp_uncovered[labels[f]]
            if left == 0:
                counts[comp] = 0
            elif len(rng) <= left:
                for a in rng:
                    ball, _ = kernels.bounded_dijkstra(g, a, T)
                    counts[ball] -= 1
            else:
                # fewer routers remain than were claimed: recount from scratch
                counts[comp] = 0
                kernels.ball_counts(g, np.flatnonzero(uncovered & comp), T, counts, 1)
            remaining -= len(rng)
            iteration += 1

        placement.assignments = dict(sorted(placement.assignments.items()))
        placement.covered_by = dict(sorted(placement.covered_by.items()))
        return placement


def place_fog_nodes(
    topology: Topology,
    classification: RouterClassification,
    config: FogConfig,
    cross_as_paths: bool = False,
    edge_only: bool = False,
    trace: bool = False,
) -> Placement:
    """Cover every edge router with a fog node within ``config.latency_threshold``.

    Raises:
        PlacementError: ``config.max_total_nodes`` would be exceeded; carries
            the uncovered routers and the partial placement.
    """
    policy = GreedyLatencyPolicy(cross_as_paths=cross_as_paths, edge_only=edge_only, trace=trace)
    return policy.place(topology, classification, config)
