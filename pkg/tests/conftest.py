from __future__ import annotations

import sys
from pathlib import Path

import pytest

from fogtopo import kernels
from fogtopo.config import FogConfig, FogNodeType
from fogtopo.model import Topology

sys.path.insert(0, str(Path(__file__).parent))

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = Path(__file__).parent / "golden"

_acceptance_results: list[tuple[str, str, str]] = []


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(cid, text): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        status = "PASS" if rep.passed else ("SKIP" if rep.skipped else "FAIL")
        _acceptance_results.append((marker.args[0], marker.args[1], status))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.section("acceptance criteria")
    for cid, text, status in sorted(_acceptance_results, key=lambda r: int(r[0].lstrip("AC"))):
        terminalreporter.write_line(f"[{status}] {cid}: {text}")


@pytest.fixture(params=kernels.available_backends())
def backend(request):
    with kernels.using(request.param):
        yield request.param


def build(edges, as_of=None, n=None) -> Topology:
    """Topology from ``(a, b, latency)`` or ``(a, b, latency, bandwidth)`` tuples."""
    routers = set()
    for e in edges:
        routers.update(e[:2])
    if n is not None:
        routers.update(range(n))
    if as_of:
        routers.update(as_of)
    topo = Topology()
    for r in sorted(routers):
        topo.add_router(r, (as_of or {}).get(r, 0))
    for e in edges:
        topo.add_link(e[0], e[1], e[2], e[3] if len(e) > 3 else 100.0)
    return topo


@pytest.fixture
def path3() -> Topology:
    """e1(0) -- m(1) -- e2(2), 3 ms per link."""
    return build([(0, 1, 3.0), (1, 2, 3.0)])


def single_type(cap=10, cost=3.0, name="std") -> FogNodeType:
    return FogNodeType(name, cap, cost, image=f"fog/{name}:1")


def fog(T, types=None, occupancy=1.0, max_nodes=None) -> FogConfig:
    return FogConfig(tuple(types or [single_type()]), occupancy, T, max_nodes)
