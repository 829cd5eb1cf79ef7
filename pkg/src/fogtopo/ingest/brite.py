"""Reader for BRITE generator exports."""

from __future__ import annotations

import re
from typing import Iterable, TextIO

from fogtopo.model import ParseError, Topology, TopologyError

_SECTION = re.compile(r"^(Nodes|Edges)\s*:\s*\(\s*(\d+)\s*\)\s*:?\s*$")

NODE_FIELDS = ("id", "x", "y", "in_degree", "out_degree", "as_id", "type")
EDGE_FIELDS = ("id", "from", "to", "length", "delay", "bandwidth", "as_from", "as_to", "type")


def _field(tokens: list[str], fields: tuple[str, ...], name: str, conv, lineno: int, source):
    i = fields.index(name)
    try:
        return conv(tokens[i])
    except (IndexError, ValueError):
        got = tokens[i] if i < len(tokens) else "<missing>"
        raise ParseError(f"bad {name} field {got!r}", lineno, source) from None


def parse_brite(text: str | Iterable[str] | TextIO, source: str | None = None) -> Topology:
    """Build a topology from BRITE ``Nodes:`` / ``Edges:`` sections.

    Link latency comes from the ``delay`` column and bandwidth from
    ``bandwidth``; the ``length`` column is ignored.
    """
    lines = text.splitlines() if isinstance(text, str) else text
    topo = Topology()
    section = None
    declared: dict[str, int] = {}
    seen = {"Nodes": 0, "Edges": 0}
    edge_rows: list[tuple[int, list[str]]] = []

    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        m = _SECTION.match(line)
        if m:
            section = m.group(1)
            if section in declared:
                raise ParseError(f"duplicate {section} section", lineno, source)
            if section == "Edges" and "Nodes" not in declared:
                raise ParseError("Edges section before Nodes section", lineno, source)
            declared[section] = int(m.group(2))
            continue
        if section is None:
            # header lines (Topology:, Model ...) before the first section
            continue
        if seen[section] == declared[section]:
            nxt = "Edges" if section == "Nodes" else "end of file"
            raise ParseError(
                f"{section} section declares {declared[section]} records but has more "
                f"(missing '{nxt}' header?)",
                lineno,
                source,
            )
        tokens = line.split()
        if section == "Nodes":
            if len(tokens) < len(NODE_FIELDS):
                raise ParseError(
                    f"node record has {len(tokens)} fields, expected {len(NODE_FIELDS)}",
                    lineno,
                    source,
                )
            rid = _field(tokens, NODE_FIELDS, "id", int, lineno, source)
            as_id = _field(tokens, NODE_FIELDS, "as_id", int, lineno, source)
            try:
                topo.add_router(rid, as_id)
            except TopologyError as exc:
                raise ParseError(str(exc), lineno, source) from None
            seen["Nodes"] += 1
        else:
            if len(tokens) < len(EDGE_FIELDS):
                raise ParseError(
                    f"edge record has {len(tokens)} fields, expected {len(EDGE_FIELDS)}",
                    lineno,
                    source,
                )
            edge_rows.append((lineno, tokens))
            seen["Edges"] += 1

    for name in ("Nodes", "Edges"):
        if name not in declared:
            raise ParseError(f"missing '{name}: ( N )' section header", None, source)
        if declared[name] != seen[name]:
            raise ParseError(
                f"{name} section declares {declared[name]} records but contains {seen[name]}",
                None,
                source,
            )

    for lineno, tokens in edge_rows:
        a = _field(tokens, EDGE_FIELDS, "from", int, lineno, source)
        b = _field(tokens, EDGE_FIELDS, "to", int, lineno, source)
        delay = _field(tokens, EDGE_FIELDS, "delay", float, lineno, source)
        bandwidth = _field(tokens, EDGE_FIELDS, "bandwidth", float, lineno, source)
        for end in (a, b):
            if end not in topo:
                raise ParseError(f"edge references unknown node {end}", lineno, source)
        try:
            topo.add_link(a, b, delay, bandwidth)
        except TopologyError as exc:
            raise ParseError(str(exc), lineno, source) from None
    return topo


def read_brite(path) -> Topology:
    with open(path, encoding="utf-8") as fh:
        return parse_brite(fh.read(), source=str(path))
