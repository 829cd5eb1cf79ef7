"""Canonical JSON interchange document for topology, classification and placement.

Keys are sorted, floats use Python's shortest round-trip repr, and every
array is ordered by router id, so identical inputs give identical bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

from fogtopo.config import FogNodeType, canonical_json
from fogtopo.model import ParseError, RouterClassification, Topology, TopologyError
from fogtopo.placement import Placement

SCHEMA_VERSION = 1


class ExportError(ValueError):
    """Inputs to an exporter refer to routers that do not exist or are incomplete."""


@dataclass
class InterchangeDocument:
    topology: Topology
    classification: RouterClassification | None = None
    placement: Placement | None = None
    metadata: dict[str, Any] = field(default_factory=dict)


def check_consistency(
    topology: Topology,
    classification: RouterClassification | None,
    placement: Placement | None,
) -> None:
    if classification is not None:
        for r in sorted(classification.backbone | classification.edge):
            if r not in topology:
                raise ExportError(f"classification refers to unknown router {r}")
        if classification.backbone & classification.edge:
            r = min(classification.backbone & classification.edge)
            raise ExportError(f"router {r} is both edge and backbone")
        missing = sorted(set(topology.routers) - classification.backbone - classification.edge)
        if missing:
            raise ExportError(f"router {missing[0]} is not classified")
    if placement is not None:
        for r in sorted(placement.assignments):
            if r not in topology:
                raise ExportError(f"placement assigns fog nodes to unknown router {r}")
        for e, f in sorted(placement.covered_by.items()):
            if e not in topology:
                raise ExportError(f"placement covers unknown router {e}")
            if f not in placement.assignments:
                raise ExportError(f"edge router {e} is covered by {f}, which hosts no fog node")


def to_document(
    topology: Topology,
    classification: RouterClassification | None = None,
    placement: Placement | None = None,
    metadata: dict[str, Any] | None = None,
) -> dict[str, Any]:
    check_consistency(topology, classification, placement)
    routers = []
    for r in topology.routers:
        entry: dict[str, Any] = {"id": r, "as": topology.as_of(r)}
        if classification is not None:
            entry["role"] = classification.role(r)
        routers.append(entry)
    links = [
        {
            "a": link.endpoint_a,
            "b": link.endpoint_b,
            "latency_ms": link.latency,
            "bandwidth_mbps": link.bandwidth,
        }
        for link in topology.links()
    ]
    doc: dict[str, Any] = {
        "schema_version": SCHEMA_VERSION,
        "routers": routers,
        "links": links,
        "classified": classification is not None,
        "placement": None,
        "metadata": metadata or {},
    }
    if placement is not None:
        doc["placement"] = {
            "node_types": [t.to_dict() for t in placement.node_types],
            "assignments": [
                {"router": r, "nodes": [t.name for t in cfg]}
                for r, cfg in sorted(placement.assignments.items())
            ],
            "covered_by": [
                {"edge": e, "fog": f} for e, f in sorted(placement.covered_by.items())
            ],
            "total_cost": float(placement.total_cost),
        }
    return doc


def export_interchange(
    topology: Topology,
    classification: RouterClassification | None = None,
    placement: Placement | None = None,
    metadata: dict[str, Any] | None = None,
) -> str:
    return canonical_json(to_document(topology, classification, placement, metadata))


def from_document(doc: dict[str, Any]) -> InterchangeDocument:
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ParseError(f"unsupported schema_version {doc.get('schema_version')!r}")
    try:
        topo = Topology()
        roles = {}
        for entry in doc["routers"]:
            topo.add_router(entry["id"], entry["as"])
            if "role" in entry:
                roles[entry["id"]] = entry["role"]
        for entry in doc["links"]:
            topo.add_link(entry["a"], entry["b"], entry["latency_ms"], entry["bandwidth_mbps"])
    except KeyError as exc:
        raise ParseError(f"interchange record missing field {exc.args[0]!r}") from None
    except TopologyError as exc:
        raise ParseError(str(exc)) from None

    classification = None
    if doc.get("classified"):
        bad = sorted(r for r, role in roles.items() if role not in ("edge", "backbone"))
        if bad or len(roles) != len(topo):
            raise ParseError("classified document needs role edge|backbone on every router")
        classification = RouterClassification(
            backbone=frozenset(r for r, role in roles.items() if role == "backbone"),
            edge=frozenset(r for r, role in roles.items() if role == "edge"),
        )

    placement = None
    pdoc = doc.get("placement")
    if pdoc is not None:
        types = {t["name"]: FogNodeType.from_dict(t) for t in pdoc["node_types"]}
        try:
            assignments = {
                a["router"]: tuple(types[name] for name in a["nodes"]) for a in pdoc["assignments"]
            }
        except KeyError as exc:
            raise ParseError(f"placement uses undeclared node type {exc.args[0]!r}") from None
        placement = Placement(
            assignments=dict(sorted(assignments.items())),
            total_cost=float(pdoc["total_cost"]),
            covered_by={c["edge"]: c["fog"] for c in sorted(pdoc["covered_by"], key=lambda c: c["edge"])},
        )
        try:
            check_consistency(topo, classification, placement)
        except ExportError as exc:
            raise ParseError(str(exc)) from None
    return InterchangeDocument(topo, classification, placement, dict(doc.get("metadata") or {}))


def parse_interchange(text: str) -> InterchangeDocument:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno) from None
    if not isinstance(doc, dict):
        raise ParseError("interchange document must be a JSON object")
    return from_document(doc)
