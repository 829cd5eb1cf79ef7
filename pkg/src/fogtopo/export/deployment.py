"""Emulator-agnostic deployment descriptor: switches, links and fog hosts."""

from __future__ import annotations

from typing import Any

from fogtopo import __version__
from fogtopo.config import FogConfig, canonical_json
from fogtopo.export.interchange import ExportError, check_consistency
from fogtopo.model import RouterClassification, Topology
from fogtopo.placement import Placement

SCHEMA_VERSION = 1
HOST_LINK_LATENCY_MS = 0.001
ISOLATED_HOST_BANDWIDTH_MBPS = 1000.0


def host_link_bandwidth(topology: Topology, router: int) -> float:
    bws = [link.bandwidth for link in topology.incident_links(router)]
    return max(bws) if bws else ISOLATED_HOST_BANDWIDTH_MBPS


def deployment_document(
    topology: Topology,
    classification: RouterClassification,
    placement: Placement,
    config: FogConfig,
    provenance: dict[str, Any] | None = None,
) -> dict[str, Any]:
    check_consistency(topology, classification, placement)
    uncovered = sorted(e for e in classification.edge if e not in placement.covered_by)
    if uncovered:
        shown = ", ".join(map(str, uncovered[:20]))
        more = f" (+{len(uncovered) - 20} more)" if len(uncovered) > 20 else ""
        raise ExportError(f"placement leaves edge routers uncovered: {shown}{more}")

    switches = [
        {"id": r, "as": topology.as_of(r), "role": classification.role(r)} for r in topology.routers
    ]
    links = [
        {
            "a": link.endpoint_a,
            "b": link.endpoint_b,
            "latency_ms": link.latency,
            "bandwidth_mbps": link.bandwidth,
        }
        for link in topology.links()
    ]
    hosts = []
    for router, cfg in sorted(placement.assignments.items()):
        bw = host_link_bandwidth(topology, router)
        for k, node_type in enumerate(cfg):
            host: dict[str, Any] = {
                "id": f"fog-{router}-{k}",
                "router": router,
                "type": node_type.name,
                "image": node_type.image,
                "max_clients": node_type.max_clients,
                "link": {"latency_ms": HOST_LINK_LATENCY_MS, "bandwidth_mbps": bw},
            }
            if node_type.memory_mb is not None:
                host["memory_mb"] = node_type.memory_mb
            if node_type.cpu_share is not None:
                host["cpu_share"] = float(node_type.cpu_share)
            hosts.append(host)
    clients = [{"edge_router": e, "fog_router": f} for e, f in sorted(placement.covered_by.items())]
    return {
        "schema_version": SCHEMA_VERSION,
        "switches": switches,
        "links": links,
        "fog_hosts": hosts,
        "clients": clients,
        "clients_per_edge": float(config.edge_occupancy),
        "metadata": {
            "tool": "fogtopo",
            "tool_version": __version__,
            "config_digest": config.digest(),
            "latency_threshold_ms": float(config.latency_threshold),
            "total_cost": float(placement.total_cost),
            "provenance": provenance or {},
        },
    }


def export_deployment(
    topology: Topology,
    classification: RouterClassification,
    placement: Placement,
    config: FogConfig,
    provenance: dict[str, Any] | None = None,
) -> str:
    """Serialized descriptor; one fog host per placed node instance."""
    return canonical_json(deployment_document(topology, classification, placement, config, provenance))
