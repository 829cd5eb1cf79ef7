"""Graphviz rendering: edge routers as circles, backbone as squares, fog hosts double-circled."""

from __future__ import annotations

from fogtopo.model import RouterClassification, Topology
from fogtopo.placement import Placement

EDGE_STYLE = 'shape=circle, style=filled, fillcolor="#b0b0b0"'
BACKBONE_STYLE = 'shape=square, style=filled, fillcolor="#404040", fontcolor=white'
FOG_STYLE = "shape=doublecircle, style=filled, fillcolor=white"


def _fmt_ms(value: float) -> str:
    return f"{value:g} ms"


def export_dot(
    topology: Topology,
    classification: RouterClassification | None = None,
    placement: Placement | None = None,
) -> str:
    fog = set(placement.assignments) if placement is not None else set()
    out = ["graph topology {", "  node [fontsize=10];"]
    for r in topology.routers:
        if r in fog:
            n = len(placement.assignments[r])
            out.append(f'  {r} [{FOG_STYLE}, tooltip="{n} fog node{"s" if n != 1 else ""}"];')
        elif classification is not None and r in classification.backbone:
            out.append(f"  {r} [{BACKBONE_STYLE}];")
        elif classification is not None and r in classification.edge:
            out.append(f"  {r} [{EDGE_STYLE}];")
        else:
            out.append(f"  {r};")
    for link in topology.links():
        out.append(f'  {link.endpoint_a} -- {link.endpoint_b} [label="{_fmt_ms(link.latency)}"];')
    out.append("}")
    return "\n".join(out) + "\n"
