"""Reader for CAIDA ITDK router-level datasets (.nodes, .links, .nodes.as, .nodes.geo)."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

from fogtopo.model import ORPHAN_AS, ParseError, Topology

logger = logging.getLogger(__name__)

FIBER_KM_PER_S = 200_000.0
EARTH_RADIUS_KM = 6371.0
GEO_LATENCY_FLOOR_MS = 0.1


@dataclass(frozen=True)
class CaidaDatasetPaths:
    nodes_file: Path
    links_file: Path
    as_file: Path
    geo_file: Path | None = None


def _records(lines: Iterable[str]) -> Iterator[tuple[int, str]]:
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield lineno, line


def _node_id(token: str, lineno: int, source: str) -> int:
    token = token.rstrip(":")
    if not token.startswith("N") or not token[1:].isdigit():
        raise ParseError(f"bad node token {token!r}", lineno, source)
    return int(token[1:])


def read_nodes(lines: Iterable[str], source: str = "nodes") -> list[int]:
    """Router ids from ``node N<id>: <addresses...>`` records."""
    ids = []
    for lineno, line in _records(lines):
        parts = line.split()
        if len(parts) < 2 or parts[0] != "node" or not parts[1].endswith(":"):
            raise ParseError(f"expected 'node N<id>:' record, got {line[:40]!r}", lineno, source)
        ids.append(_node_id(parts[1], lineno, source))
    return ids


def read_links(lines: Iterable[str], source: str = "links") -> list[tuple[str, int, list[int]]]:
    """``(link_id, lineno, [node ids])`` per ``link L<id>: N<a>:<addr> N<b> ...`` record."""
    out = []
    for lineno, line in _records(lines):
        parts = line.split()
        if len(parts) < 3 or parts[0] != "link" or not parts[1].endswith(":"):
            raise ParseError(f"expected 'link L<id>: ...' record, got {line[:40]!r}", lineno, source)
        link_id = parts[1][:-1]
        # addresses may be IPv6, so only split on the first colon
        nodes = [_node_id(tok.split(":", 1)[0], lineno, source) for tok in parts[2:]]
        out.append((link_id, lineno, nodes))
    return out


def read_as(lines: Iterable[str], source: str = "as") -> dict[int, int]:
    """Router → AS from ``node.AS N<id> <as> [method]`` records."""
    mapping = {}
    for lineno, line in _records(lines):
        parts = line.split()
        if len(parts) < 3 or parts[0] != "node.AS":
            raise ParseError(f"expected 'node.AS N<id> <as>' record, got {line[:40]!r}", lineno, source)
        rid = _node_id(parts[1], lineno, source)
        try:
            mapping[rid] = int(parts[2])
        except ValueError:
            raise ParseError(f"bad AS number {parts[2]!r}", lineno, source) from None
    return mapping


def read_geo(lines: Iterable[str], source: str = "geo") -> dict[int, tuple[float, float]]:
    """Router → (lat, lon) from ``node.geo N<id>: continent country region city lat lon ...``.

    Fields after the node token are tab separated in ITDK releases (city
    names contain spaces); whitespace splitting is the fallback.
    """
    coords = {}
    for lineno, line in _records(lines):
        head, _, rest = line.partition(":")
        head_parts = head.split()
        if len(head_parts) != 2 or head_parts[0] != "node.geo":
            raise ParseError(f"expected 'node.geo N<id>:' record, got {line[:40]!r}", lineno, source)
        rid = _node_id(head_parts[1], lineno, source)
        fields = rest.strip("\n").split("\t") if "\t" in rest else rest.split()
        fields = [f.strip() for f in fields]
        if fields and fields[0] == "":
            fields = fields[1:]
        try:
            coords[rid] = (float(fields[4]), float(fields[5]))
        except (IndexError, ValueError):
            raise ParseError("missing or bad latitude/longitude", lineno, source) from None
    return coords


def great_circle_km(a: tuple[float, float], b: tuple[float, float]) -> float:
    lat1, lon1 = map(math.radians, a)
    lat2, lon2 = map(math.radians, b)
    h = (
        math.sin((lat2 - lat1) / 2) ** 2
        + math.cos(lat1) * math.cos(lat2) * math.sin((lon2 - lon1) / 2) ** 2
    )
    return 2 * EARTH_RADIUS_KM * math.asin(min(1.0, math.sqrt(h)))


def geo_latency_ms(a: tuple[float, float], b: tuple[float, float]) -> float:
    """Propagation delay over fibre between two coordinates, floored at 0.1 ms."""
    return max(GEO_LATENCY_FLOOR_MS, great_circle_km(a, b) / FIBER_KM_PER_S * 1000.0)


def parse_caida(
    paths: CaidaDatasetPaths,
    default_latency: float = 1.0,
    default_bandwidth: float = 1000.0,
) -> Topology:
    """Assemble a topology from ITDK files.

    Multi-node link records become a star on their first node. Routers with
    no AS record land in :data:`~fogtopo.model.ORPHAN_AS`.
    """

    def lines(path):
        with open(path, encoding="utf-8", errors="replace") as fh:
            yield from fh

    nodes = read_nodes(lines(paths.nodes_file), str(paths.nodes_file))
    links = read_links(lines(paths.links_file), str(paths.links_file))
    as_map = read_as(lines(paths.as_file), str(paths.as_file))
    geo = read_geo(lines(paths.geo_file), str(paths.geo_file)) if paths.geo_file else None
    return build_topology(nodes, links, as_map, geo, default_latency, default_bandwidth,
                          str(paths.links_file))


def build_topology(
    nodes: list[int],
    links: list[tuple[str, int, list[int]]],
    as_map: dict[int, int],
    geo: dict[int, tuple[float, float]] | None = None,
    default_latency: float = 1.0,
    default_bandwidth: float = 1000.0,
    links_source: str = "links",
) -> Topology:
    topo = Topology()
    orphans = 0
    for rid in nodes:
        as_id = as_map.get(rid)
        if as_id is None:
            as_id = ORPHAN_AS
            orphans += 1
        try:
            topo.add_router(rid, as_id)
        except ValueError as exc:
            raise ParseError(str(exc), None, "nodes") from None
    if orphans:
        logger.info("%d routers without AS record assigned to AS %d", orphans, ORPHAN_AS)
    unknown_as = sum(1 for rid in as_map if rid not in topo)
    if unknown_as:
        logger.warning("%d AS records refer to undeclared nodes; ignored", unknown_as)

    for link_id, lineno, members in links:
        for rid in members:
            if rid not in topo:
                raise ParseError(f"link {link_id} references undeclared node N{rid}", lineno,
                                 links_source)
        hub = members[0]
        for other in members[1:]:
            if other == hub:
                continue
            latency = default_latency
            if geo is not None and hub in geo and other in geo:
                latency = geo_latency_ms(geo[hub], geo[other])
            topo.add_link(hub, other, latency, default_bandwidth)
    return topo
