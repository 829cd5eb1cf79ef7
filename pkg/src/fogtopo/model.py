"""AS-partitioned undirected router graph shared by every pipeline stage."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Iterator

import numpy as np

logger = logging.getLogger(__name__)

#: AS id that collects routers without an AS record.
ORPHAN_AS = -1

DEFAULT_LATENCY_FLOOR_MS = 0.001
DEFAULT_BANDWIDTH_FLOOR_MBPS = 0.1


class TopologyError(ValueError):
    """Invalid topology construction or lookup."""


class ParseError(TopologyError):
    """Malformed input file; carries the 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        self.line = line
        self.source = source
        where = ""
        if source:
            where += f"{source}:"
        if line is not None:
            where += f"line {line}: "
        elif where:
            where += " "
        super().__init__(where + message)


@dataclass(frozen=True, order=True)
class Link:
    """Undirected link; endpoints are stored with ``endpoint_a < endpoint_b``."""

    endpoint_a: int
    endpoint_b: int
    latency: float
    bandwidth: float

    def __post_init__(self) -> None:
        if self.endpoint_a == self.endpoint_b:
            raise TopologyError(f"self-loop on router {self.endpoint_a}")
        if self.endpoint_a > self.endpoint_b:
            raise TopologyError("endpoints must be ordered; use Link.between")

    @classmethod
    def between(cls, a: int, b: int, latency: float, bandwidth: float) -> "Link":
        if a > b:
            a, b = b, a
        return cls(a, b, float(latency), float(bandwidth))

    @property
    def key(self) -> tuple[int, int]:
        return (self.endpoint_a, self.endpoint_b)

    def other(self, router: int) -> int:
        return self.endpoint_b if router == self.endpoint_a else self.endpoint_a


@dataclass(frozen=True)
class RouterClassification:
    """Edge/backbone partition of a topology's routers."""

    backbone: frozenset[int]
    edge: frozenset[int]

    def __post_init__(self) -> None:
        overlap = self.backbone & self.edge
        if overlap:
            raise ValueError(f"routers both edge and backbone: {sorted(overlap)[:10]}")

    def role(self, router: int) -> str:
        if router in self.backbone:
            return "backbone"
        if router in self.edge:
            return "edge"
        raise TopologyError(f"router {router} is not classified")


@dataclass
class CSRGraph:
    """Compressed adjacency of a topology, indexed by position in ``ids``.

    ``ids`` is sorted ascending, so index order equals router-id order.
    """

    ids: np.ndarray
    indptr: np.ndarray
    indices: np.ndarray
    weights: np.ndarray
    index: dict[int, int]
    as_of: np.ndarray
    _lists: tuple | None = field(default=None, repr=False)
    _labels: np.ndarray | None = field(default=None, repr=False)

    def __len__(self) -> int:
        return len(self.ids)

    def component_labels(self) -> np.ndarray:
        """Connected-component label per index, numbered in order of smallest index."""
        if self._labels is None:
            indptr, indices, _ = self.as_lists()
            labels = [-1] * len(self.ids)
            current = 0
            for start in range(len(labels)):
                if labels[start] >= 0:
                    continue
                labels[start] = current
                stack = [start]
                while stack:
                    v = stack.pop()
                    for k in range(indptr[v], indptr[v + 1]):
                        n = indices[k]
                        if labels[n] < 0:
                            labels[n] = current
                            stack.append(n)
                current += 1
            self._labels = np.asarray(labels, dtype=np.int64)
        return self._labels

    def as_lists(self) -> tuple[list[int], list[int], list[float]]:
        if self._lists is None:
            self._lists = (
                self.indptr.tolist(),
                self.indices.tolist(),
                self.weights.tolist(),
            )
        return self._lists


class Topology:
    """Undirected weighted router graph partitioned into autonomous systems.

    Parallel links are merged on insertion (minimum latency, maximum
    bandwidth). Non-positive weights are clamped to the configured floors.
    """

    def __init__(
        self,
        latency_floor: float = DEFAULT_LATENCY_FLOOR_MS,
        bandwidth_floor: float = DEFAULT_BANDWIDTH_FLOOR_MBPS,
    ) -> None:
        self.latency_floor = latency_floor
        self.bandwidth_floor = bandwidth_floor
        self._as_of: dict[int, int] = {}
        self._members: dict[int, set[int]] = {}
        self._adj: dict[int, dict[int, Link]] = {}
        self._n_links = 0
        self._csr_cache: dict[bool, CSRGraph] = {}
        #: Cross-AS links removed when this topology was cut out of a larger one.
        self.boundary_links: tuple[Link, ...] = ()

    # construction

    def add_router(self, router: int, as_id: int) -> None:
        router = int(router)
        if router < 0:
            raise TopologyError(f"router id must be non-negative, got {router}")
        if router in self._as_of:
            raise TopologyError(f"duplicate router id {router}")
        self._as_of[router] = int(as_id)
        self._members.setdefault(int(as_id), set()).add(router)
        self._adj[router] = {}
        self._csr_cache.clear()

    def add_link(self, a: int, b: int, latency: float, bandwidth: float) -> Link:
        """Insert or merge the link ``a``--``b`` and return the stored link."""
        a, b = int(a), int(b)
        for end in (a, b):
            if end not in self._as_of:
                raise TopologyError(f"link ({a}, {b}) references unknown router {end}")
        if a == b:
            raise TopologyError(f"self-loop on router {a}")
        latency = self._clamp(float(latency), self.latency_floor, "latency", a, b)
        bandwidth = self._clamp(float(bandwidth), self.bandwidth_floor, "bandwidth", a, b)

        existing = self._adj[a].get(b)
        if existing is not None:
            latency = min(latency, existing.latency)
            bandwidth = max(bandwidth, existing.bandwidth)
        else:
            self._n_links += 1
        link = Link.between(a, b, latency, bandwidth)
        self._adj[a][b] = link
        self._adj[b][a] = link
        self._csr_cache.clear()
        return link

    def add(self, link: Link) -> Link:
        return self.add_link(link.endpoint_a, link.endpoint_b, link.latency, link.bandwidth)

    @staticmethod
    def _clamp(value: float, floor: float, what: str, a: int, b: int) -> float:
        if not np.isfinite(value):
            raise TopologyError(f"link ({a}, {b}) has non-finite {what} {value}")
        if value <= 0:
            logger.warning("link (%d, %d): %s %g clamped to %g", a, b, what, value, floor)
            return floor
        return value

    # queries

    def __len__(self) -> int:
        return len(self._as_of)

    def __contains__(self, router: object) -> bool:
        return router in self._as_of

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Topology):
            return NotImplemented
        return self._as_of == other._as_of and self.link_set() == other.link_set()

    def __repr__(self) -> str:
        return f"Topology(routers={len(self)}, links={self._n_links}, ases={len(self._members)})"

    @property
    def routers(self) -> list[int]:
        return sorted(self._as_of)

    @property
    def n_links(self) -> int:
        return self._n_links

    @property
    def as_ids(self) -> list[int]:
        return sorted(self._members)

    def as_of(self, router: int) -> int:
        try:
            return self._as_of[router]
        except KeyError:
            raise TopologyError(f"unknown router {router}") from None

    def as_members(self, as_id: int) -> set[int]:
        try:
            return self._members[as_id]
        except KeyError:
            raise TopologyError(f"unknown AS {as_id}") from None

    def as_sizes(self) -> dict[int, int]:
        return {a: len(m) for a, m in sorted(self._members.items())}

    def neighbors(self, router: int) -> Iterable[int]:
        try:
            return self._adj[router].keys()
        except KeyError:
            raise TopologyError(f"unknown router {router}") from None

    def link(self, a: int, b: int) -> Link | None:
        return self._adj.get(a, {}).get(b)

    def incident_links(self, router: int) -> Iterable[Link]:
        try:
            return self._adj[router].values()
        except KeyError:
            raise TopologyError(f"unknown router {router}") from None

    def degree(self, router: int) -> int:
        """Number of neighbours over all links, cross-AS included."""
        return len(self.neighbors(router))

    def intra_degree(self, router: int) -> int:
        """Number of neighbours inside the router's own AS."""
        home = self.as_of(router)
        return sum(1 for n in self._adj[router] if self._as_of[n] == home)

    def links(self) -> Iterator[Link]:
        """Yield every link once, ordered by endpoint pair."""
        for a in sorted(self._adj):
            row = self._adj[a]
            for b in sorted(row):
                if a < b:
                    yield row[b]

    def link_set(self) -> set[Link]:
        return set(self.links())

    def is_cross_as(self, link: Link) -> bool:
        return self._as_of[link.endpoint_a] != self._as_of[link.endpoint_b]

    def cross_as_links(self) -> list[Link]:
        return [link for link in self.links() if self.is_cross_as(link)]

    def as_subgraph(self, as_id: int) -> "Topology":
        """Induced subgraph of one AS.

        Links leaving the AS are kept on the result's ``boundary_links``.
        """
        members = self.as_members(as_id)
        sub = Topology(self.latency_floor, self.bandwidth_floor)
        for r in sorted(members):
            sub.add_router(r, as_id)
        boundary = []
        for r in sorted(members):
            for n, link in sorted(self._adj[r].items()):
                if n in members:
                    if r < n:
                        sub.add(link)
                else:
                    boundary.append(link)
        sub.boundary_links = tuple(sorted(boundary))
        return sub

    @property
    def boundary(self) -> set[int]:
        """Endpoints of ``boundary_links``."""
        return {e for link in self.boundary_links for e in link.key}

    def components(self, intra_as: bool = True) -> list[list[int]]:
        """Connected components as sorted router lists, ordered by smallest id."""
        seen: set[int] = set()
        comps = []
        for start in self.routers:
            if start in seen:
                continue
            home = self._as_of[start]
            comp = [start]
            seen.add(start)
            stack = [start]
            while stack:
                v = stack.pop()
                for n in self._adj[v]:
                    if n in seen or (intra_as and self._as_of[n] != home):
                        continue
                    seen.add(n)
                    comp.append(n)
                    stack.append(n)
            comps.append(sorted(comp))
        return comps

    def csr(self, intra_as: bool = True) -> CSRGraph:
        """Latency-weighted CSR adjacency, optionally dropping cross-AS links.

        Cached until the next mutation.
        """
        cached = self._csr_cache.get(intra_as)
        if cached is not None:
            return cached
        ids = self.routers
        index = {r: i for i, r in enumerate(ids)}
        indptr = [0]
        indices: list[int] = []
        weights: list[float] = []
        for r in ids:
            home = self._as_of[r]
            for n, link in sorted(self._adj[r].items()):
                if intra_as and self._as_of[n] != home:
                    continue
                indices.append(index[n])
                weights.append(link.latency)
            indptr.append(len(indices))
        graph = CSRGraph(
            ids=np.asarray(ids, dtype=np.int64),
            indptr=np.asarray(indptr, dtype=np.int64),
            indices=np.asarray(indices, dtype=np.int64),
            weights=np.asarray(weights, dtype=np.float64),
            index=index,
            as_of=np.asarray([self._as_of[r] for r in ids], dtype=np.int64),
        )
        self._csr_cache[intra_as] = graph
        return graph

    def copy(self) -> "Topology":
        dup = Topology(self.latency_floor, self.bandwidth_floor)
        for r in self.routers:
            dup.add_router(r, self._as_of[r])
        for link in self.links():
            dup.add(link)
        dup.boundary_links = self.boundary_links
        return dup
