"""Cutting single autonomous systems out of larger topologies."""

from __future__ import annotations

from fogtopo.model import Topology, TopologyError


def select_as_by_size(topology: Topology, target_n: int, tolerance: float = 0.05) -> list[int]:
    """AS ids whose router count lies within ``tolerance * target_n`` of ``target_n``."""
    if target_n < 1:
        raise TopologyError(f"target_n must be positive, got {target_n}")
    if tolerance < 0:
        raise TopologyError(f"tolerance must be non-negative, got {tolerance}")
    slack = tolerance * target_n
    return [
        as_id
        for as_id, size in topology.as_sizes().items()
        if abs(size - target_n) <= slack + 1e-9
    ]


def filter_as(topology: Topology, as_id: int) -> Topology:
    """The AS's induced subgraph as a standalone topology."""
    sub = topology.as_subgraph(as_id)
    sub.boundary_links = ()
    return sub
