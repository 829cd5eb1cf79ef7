"""Backend selection for the hot loops.

The compiled ``_ckernels`` extension is used when it imports; otherwise the
pure-Python ``_pykernels`` module takes over. Setting ``FOGTOPO_PURE_PYTHON=1``
forces the fallback.
"""

from __future__ import annotations

import contextlib
import os
from typing import Iterator

import numpy as np

from fogtopo import _pykernels
from fogtopo.model import CSRGraph

try:
    from fogtopo import _ckernels
except ImportError:  # pragma: no cover - depends on the build
    _ckernels = None

_BACKENDS = {"python": _pykernels}
if _ckernels is not None:
    _BACKENDS["compiled"] = _ckernels

if os.environ.get("FOGTOPO_PURE_PYTHON", "") not in ("", "0") or _ckernels is None:
    _active = "python"
else:
    _active = "compiled"


def available_backends() -> list[str]:
    return sorted(_BACKENDS)


def backend() -> str:
    return _active


def set_backend(name: str) -> None:
    global _active
    if name not in _BACKENDS:
        raise ValueError(f"unknown or unavailable kernel backend {name!r}")
    _active = name


@contextlib.contextmanager
def using(name: str) -> Iterator[None]:
    prev = _active
    set_backend(name)
    try:
        yield
    finally:
        set_backend(prev)


def _csr_args(graph: CSRGraph):
    if _active == "python":
        return graph.as_lists()
    return graph.indptr, graph.indices, graph.weights


def _state(arr: np.ndarray):
    return memoryview(arr) if _active == "python" else arr


def bounded_dijkstra(graph: CSRGraph, source: int, bound: float) -> tuple[np.ndarray, np.ndarray]:
    """Indices and distances of nodes within ``bound`` of index ``source``."""
    return _BACKENDS[_active].bounded_dijkstra(*_csr_args(graph), int(source), float(bound))


def ball_counts(
    graph: CSRGraph, sources: np.ndarray, bound: float, counts: np.ndarray, delta: int
) -> None:
    """In place: ``counts[v] += delta`` once per source whose ball contains ``v``."""
    sources = np.ascontiguousarray(sources, dtype=np.int64)
    impl = _BACKENDS[_active]
    if _active == "python":
        sources = sources.tolist()
    impl.ball_counts(*_csr_args(graph), sources, float(bound), _state(counts), int(delta))


def connect_backbone(
    graph: CSRGraph,
    root: int,
    in_backbone: np.ndarray,
    visited: np.ndarray,
    parent: np.ndarray,
) -> int:
    """Run the backbone-joining BFS from index ``root``; returns dequeue count."""
    indptr, indices, _ = _csr_args(graph)
    return _BACKENDS[_active].connect_backbone(
        indptr, indices, int(root), _state(in_backbone), _state(visited), _state(parent)
    )


def min_cost_cover(caps, costs, max_demand: int) -> tuple[np.ndarray, np.ndarray]:
    return _BACKENDS[_active].min_cost_cover(list(caps), list(costs), int(max_demand))
