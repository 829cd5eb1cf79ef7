"""Edge/backbone router identification.

Every router starts as an edge router. Border routers (Step 1) and routers
whose degree is strictly above their AS's average (Step 2) become backbone;
a BFS then pulls in the routers needed to make each AS component's backbone
connected (Step 3).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from fogtopo import kernels
from fogtopo.model import RouterClassification, Topology, TopologyError

DegreeMode = Literal["total", "intra"]


@dataclass(frozen=True)
class ComponentRun:
    """One backbone-joining BFS: its seed router and how many routers it dequeued."""

    root: int
    dequeued: int


def _cross_as_mask(topology: Topology) -> np.ndarray:
    g = topology.csr(intra_as=False)
    src = np.repeat(np.arange(len(g)), np.diff(g.indptr))
    mask = np.zeros(len(g), dtype=bool)
    mask[src[g.as_of[src] != g.as_of[g.indices]]] = True
    return mask


def _high_degree_mask(topology: Topology, degree_mode: DegreeMode) -> np.ndarray:
    """Routers whose degree is strictly above their own AS's average."""
    if degree_mode not in ("total", "intra"):
        raise ValueError(f"unknown degree_mode {degree_mode!r}")
    g = topology.csr(intra_as=degree_mode == "intra")
    degree = np.diff(g.indptr)
    _, as_code = np.unique(g.as_of, return_inverse=True)
    size = np.bincount(as_code)
    total = np.bincount(as_code, weights=degree).astype(np.int64)
    # degree > total / size, kept in integers
    return degree * size[as_code] > total[as_code]


def mark_cross_as_routers(topology: Topology) -> set[int]:
    """Routers incident to at least one link whose endpoints sit in different ASs."""
    g = topology.csr(intra_as=False)
    return set(g.ids[_cross_as_mask(topology)].tolist())


def mark_high_degree_routers(
    topology: Topology,
    as_id: int,
    already_backbone: set[int] | frozenset[int] = frozenset(),
    degree_mode: DegreeMode = "total",
) -> set[int]:
    """Routers of ``as_id`` not yet backbone whose degree exceeds the AS average.

    ``degree_mode="total"`` counts cross-AS links too; ``"intra"`` counts only
    links inside the AS. The comparison is strict.
    """
    topology.as_members(as_id)  # rejects unknown AS
    g = topology.csr(intra_as=False)
    mask = _high_degree_mask(topology, degree_mode) & (g.as_of == as_id)
    return {r for r in g.ids[mask].tolist() if r not in already_backbone}


def connect_backbone(as_graph: Topology, backbone: set[int]) -> set[int]:
    """Extend ``backbone`` so that it induces a connected subgraph of ``as_graph``.

    The BFS is seeded at the lowest backbone router id. ``as_graph`` must be
    connected; split disconnected graphs into components first.
    """
    if not backbone:
        raise TopologyError("connect_backbone needs a non-empty backbone")
    unknown = sorted(r for r in backbone if r not in as_graph)
    if unknown:
        raise TopologyError(f"backbone routers {unknown} are not in the graph")
    if len(as_graph.components(intra_as=False)) > 1:
        raise TopologyError("connect_backbone requires a connected graph")
    g = as_graph.csr(intra_as=False)
    in_b = np.zeros(len(g), dtype=np.uint8)
    for r in backbone:
        in_b[g.index[r]] = 1
    visited = np.zeros(len(g), dtype=np.uint8)
    parent = np.full(len(g), -1, dtype=np.int64)
    kernels.connect_backbone(g, g.index[min(backbone)], in_b, visited, parent)
    return {int(r) for r in g.ids[in_b.astype(bool)]}


def classify_detailed(
    topology: Topology, degree_mode: DegreeMode = "total"
) -> tuple[RouterClassification, list[ComponentRun]]:
    """Classification plus one :class:`ComponentRun` per AS component that had a backbone."""
    g = topology.csr(intra_as=True)
    # Steps 1 and 2; both CSRs share the sorted router order
    in_b = (_cross_as_mask(topology) | _high_degree_mask(topology, degree_mode)).astype(np.uint8)

    # the intra-AS CSR keeps each BFS inside its own AS component; seeds are
    # visited in id order so each component is seeded at its lowest backbone id
    visited = np.zeros(len(g), dtype=np.uint8)
    parent = np.full(len(g), -1, dtype=np.int64)
    runs = []
    for idx in np.flatnonzero(in_b).tolist():
        if visited[idx]:
            continue
        dequeued = kernels.connect_backbone(g, idx, in_b, visited, parent)
        runs.append(ComponentRun(int(g.ids[idx]), int(dequeued)))

    mask = in_b.astype(bool)
    result = RouterClassification(
        backbone=frozenset(g.ids[mask].tolist()),
        edge=frozenset(g.ids[~mask].tolist()),
    )
    return result, runs


def classify(topology: Topology, degree_mode: DegreeMode = "total") -> RouterClassification:
    """Partition every router into edge and backbone sets."""
    return classify_detailed(topology, degree_mode)[0]
