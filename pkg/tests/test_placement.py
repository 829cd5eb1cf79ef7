from __future__ import annotations

import random

import numpy as np

import pytest

from conftest import build, fog, single_type
from fogtopo.classify import classify
from fogtopo.config import FogNodeType
from fogtopo.ingest import GeneratorParams, generate_barabasi_albert
from fogtopo.model import RouterClassification, TopologyError
from fogtopo.placement import (
    CoverTable,
    PlacementError,
    bounded_latencies,
    client_demand,
    determine_candidates,
    optimal_configuration,
    place_fog_nodes,
)
from oracles import all_pairs_latency, brute_force_cover, exact_demand, random_connected_graph

CAP5 = FogNodeType("five", 5, 10.0)
CAP2 = FogNodeType("two", 2, 5.0)


def edges_of(topology, *routers):
    rs = set(routers)
    return RouterClassification(frozenset(set(topology.routers) - rs), frozenset(rs))


# --- bounded_latencies ---------------------------------------------------------

def test_bounded_latencies_self(backend):
    t = build([(0, 1, 3.0)])
    assert bounded_latencies(t, 1, 10)[1] == 0.0


def test_bounded_latencies_cutoff(backend):
    t = build([(0, 1, 2.0), (1, 2, 3.0)])
    assert bounded_latencies(t, 0, 4) == {0: 0.0, 1: 2.0}


def test_bounded_latencies_triangle(backend):
    t = build([(0, 1, 5.0), (1, 2, 5.0), (0, 2, 1.0)])
    assert bounded_latencies(t, 0, 6) == {0: 0.0, 1: 5.0, 2: 1.0}


def test_bounded_latencies_bound_inclusive(backend):
    t = build([(0, 1, 2.0), (1, 2, 2.0)])
    assert bounded_latencies(t, 0, 4) == {0: 0.0, 1: 2.0, 2: 4.0}


def test_bounded_latencies_respects_as(backend):
    t = build([(0, 1, 1.0), (1, 2, 1.0)], as_of={0: 0, 1: 0, 2: 1})
    assert set(bounded_latencies(t, 0, 10)) == {0, 1}
    assert set(bounded_latencies(t, 0, 10, cross_as_paths=True)) == {0, 1, 2}


def test_bounded_latencies_errors():
    t = build([(0, 1, 1.0)])
    with pytest.raises(TopologyError):
        bounded_latencies(t, 5, 1.0)
    with pytest.raises(ValueError):
        bounded_latencies(t, 0, 0.0)


@pytest.mark.parametrize("seed", range(10))
def test_bounded_latencies_match_floyd(seed, backend):
    rng = random.Random(seed)
    t = random_connected_graph(rng, 15, 10, latencies=(0.5, 1.25, 2.0, 3.75))
    ids, d = all_pairs_latency(t)
    bound = rng.choice([1.0, 2.5, 4.0, 100.0])
    for i, src in enumerate(ids):
        got = bounded_latencies(t, src, bound)
        want = {ids[j]: d[i, j] for j in range(len(ids)) if d[i, j] <= bound}
        assert got.keys() == want.keys()
        for k in want:
            assert got[k] == pytest.approx(want[k], abs=1e-12)


# --- optimal_configuration -------------------------------------------------------

def test_config_single_type(backend):
    conf, cost = optimal_configuration(3, [FogNodeType("a", 5, 10.0)])
    assert [t.name for t in conf] == ["a"] and cost == 10.0


def test_config_demand6_tie_to_fewer_nodes(backend):
    conf, cost = optimal_configuration(6, [CAP5, CAP2])
    assert cost == 15.0
    assert sorted(t.name for t in conf) == ["five", "two"]


def test_config_demand7(backend):
    conf, cost = optimal_configuration(7, [FogNodeType("s", 3, 4.0), FogNodeType("l", 10, 9.0)])
    assert [t.name for t in conf] == ["l"] and cost == 9.0


def test_config_name_tiebreak(backend):
    # same cost and node count: "alpha" sorts first
    conf, _ = optimal_configuration(4, [FogNodeType("beta", 4, 2.0), FogNodeType("alpha", 4, 2.0)])
    assert [t.name for t in conf] == ["alpha"]


def test_config_matches_brute_force_small(backend):
    rng = random.Random(3)
    for _ in range(20):
        types = [FogNodeType(f"t{i}", rng.randint(1, 6), float(rng.randint(1, 9))) for i in range(rng.randint(1, 3))]
        for demand in range(1, 13):
            conf, cost = optimal_configuration(demand, types)
            assert (cost, len(conf), tuple(t.name for t in conf)) == brute_force_cover(demand, types)


def test_config_errors():
    with pytest.raises(ValueError):
        optimal_configuration(0, [CAP5])
    with pytest.raises(ValueError):
        optimal_configuration(3, [])
    with pytest.raises(ValueError):
        CoverTable([CAP5], 3).configuration(4)


@pytest.mark.parametrize(
    "coverage, occupancy, expected",
    [(10, 0.7, 7), (3, 1.5, 5), (1, 2.0, 2), (7, 0.1, 1), (0, 3.0, 0), (3, 0.1, 1)],
)
def test_client_demand(coverage, occupancy, expected):
    assert client_demand(coverage, occupancy) == expected == exact_demand(coverage, occupancy)


# --- determine_candidates --------------------------------------------------------------

def ranges(cands):
    return {c.router: set(c.range) for c in cands}


def test_candidates_single_edge():
    t = build([(0, 1, 5.0)])
    cands = determine_candidates(t, {0}, fog(1.0))
    assert ranges(cands) == {0: {0}}


def test_candidates_path_T4(path3):
    assert ranges(determine_candidates(path3, {0, 2}, fog(4))) == {0: {0}, 1: {0, 2}, 2: {2}}


def test_candidates_path_T2(path3):
    assert ranges(determine_candidates(path3, {0, 2}, fog(2))) == {0: {0}, 2: {2}}


def test_candidates_empty():
    assert determine_candidates(build([(0, 1, 1.0)]), set(), fog(4)) == []


def test_candidate_cost_uses_demand():
    t = build([(0, 1, 1.0), (0, 2, 1.0)])
    cands = {c.router: c for c in determine_candidates(t, {1, 2}, fog(4, [CAP5, CAP2], occupancy=3))}
    # two edge routers x 3 clients = 6 -> five + two, cost 15
    assert cands[0].cost == 15.0 and cands[0].coverage == 2


# --- place_fog_nodes -------------------------------------------------------------

def test_place_single_edge(backend):
    t = build([], n=1)
    p = place_fog_nodes(t, edges_of(t, 0), fog(4, [single_type(10, 3.0)], occupancy=2))
    assert {r: [x.name for x in c] for r, c in p.assignments.items()} == {0: ["std"]}
    assert p.total_cost == 3.0


def test_place_path_T4_interior(path3, backend):
    p = place_fog_nodes(path3, classify(path3), fog(4))
    assert list(p.assignments) == [1]
    assert p.total_cost == 3.0
    assert p.covered_by == {0: 1, 2: 1}


def test_place_path_T2_edges(path3, backend):
    p = place_fog_nodes(path3, classify(path3), fog(2))
    assert list(p.assignments) == [0, 2]
    assert p.total_cost == 6.0
    assert p.covered_by == {0: 0, 2: 2}


def test_place_empty_edge_set():
    t = build([(0, 1, 1.0)])
    p = place_fog_nodes(t, RouterClassification(frozenset({0, 1}), frozenset()), fog(4))
    assert p.assignments == {} and p.total_cost == 0.0 and p.covered_by == {}


def test_place_max_total_nodes(path3, backend):
    with pytest.raises(PlacementError) as err:
        place_fog_nodes(path3, classify(path3), fog(2, max_nodes=1))
    assert err.value.uncovered == [2]
    assert list(err.value.partial.assignments) == [0]


def test_place_max_total_nodes_zero(path3):
    with pytest.raises(PlacementError) as err:
        place_fog_nodes(path3, classify(path3), fog(4, max_nodes=0))
    assert err.value.uncovered == [0, 2]
    assert err.value.partial.node_count == 0


def test_place_max_total_counts_instances():
    # one router needs two nodes to serve 6 clients
    t = build([], n=1)
    cfg = fog(4, [FogNodeType("small", 3, 1.0)], occupancy=6, max_nodes=1)
    with pytest.raises(PlacementError):
        place_fog_nodes(t, edges_of(t, 0), cfg)
    p = place_fog_nodes(t, edges_of(t, 0), fog(4, [FogNodeType("small", 3, 1.0)], occupancy=6, max_nodes=2))
    assert p.node_count == 2


def test_place_edge_only(path3):
    p = place_fog_nodes(path3, classify(path3), fog(4), edge_only=True)
    assert set(p.assignments) <= {0, 2}
    assert set(p.covered_by) == {0, 2}


def test_place_cross_as_switch():
    # edge routers 0 and 2 sit in different ASs, router 1 bridges them
    t = build([(0, 1, 1.0), (1, 2, 1.0)], as_of={0: 0, 1: 0, 2: 1})
    cls = edges_of(t, 0, 2)
    per_as = place_fog_nodes(t, cls, fog(1.5))
    crossing = place_fog_nodes(t, cls, fog(1.5), cross_as_paths=True)
    assert len(per_as.assignments) == 2
    assert list(crossing.assignments) == [1]


def test_place_tie_prefers_lower_id(backend):
    # two symmetric edge routers, each only covering itself
    t = build([(0, 1, 10.0)])
    p = place_fog_nodes(t, edges_of(t, 0, 1), fog(2), trace=True)
    assert [rec.chosen for rec in p.trace] == [0, 1]


def test_place_tie_prefers_larger_coverage():
    # router 1 covers {0, 2} with two nodes; router 0 covers {0} with one: equal ratios
    t = build([(0, 1, 1.0), (1, 2, 1.0)])
    cfg = fog(1.5, [FogNodeType("one", 1, 1.0)], occupancy=1)
    p = place_fog_nodes(t, edges_of(t, 0, 2), cfg, trace=True)
    first = p.trace[0]
    assert first.chosen == 1
    assert p.total_cost == 2.0


def test_place_trace_contents(path3):
    p = place_fog_nodes(path3, classify(path3), fog(4), trace=True)
    rec = p.trace[0]
    assert rec.routers.tolist() == [0, 1, 2]
    assert rec.coverage.tolist() == [1, 2, 1]
    assert rec.cost.tolist() == [3.0, 3.0, 3.0]
    assert rec.chosen_range == (0, 2)
    assert rec.n_candidates == 3


def test_place_unknown_edge_router():
    t = build([(0, 1, 1.0)])
    with pytest.raises(TopologyError):
        place_fog_nodes(t, RouterClassification(frozenset(), frozenset({0, 1, 7})), fog(4))


def check_placement(t, cls, cfg, p, cross=False):
    ids, d = all_pairs_latency(t, intra_as=not cross)
    pos = {r: i for i, r in enumerate(ids)}
    assert set(p.covered_by) == set(cls.edge)
    for e, f in p.covered_by.items():
        assert d[pos[e], pos[f]] <= cfg.latency_threshold + 1e-9
    served: dict[int, int] = {}
    for rec in p.trace:
        served[rec.chosen] = served.get(rec.chosen, 0) + len(rec.chosen_range)
    for f, conf in p.assignments.items():
        assert sum(x.max_clients for x in conf) >= exact_demand(served[f], cfg.edge_occupancy)
    assert p.total_cost == pytest.approx(sum(x.cost for c in p.assignments.values() for x in c))
    assert len(p.trace) <= len(cls.edge)


@pytest.mark.parametrize("seed", range(15))
def test_random_placements_satisfy_invariants(seed, backend):
    rng = random.Random(seed)
    t = generate_barabasi_albert(GeneratorParams(rng.randint(5, 80), rng.randint(1, 3), seed))
    cls = classify(t)
    types = [FogNodeType(f"t{i}", rng.randint(1, 10), float(rng.randint(1, 20))) for i in range(rng.randint(1, 3))]
    cfg = fog(rng.choice([2, 4, 8]), types, occupancy=rng.choice([0.5, 1, 2.5, 3]))
    p = place_fog_nodes(t, cls, cfg, trace=True)
    check_placement(t, cls, cfg, p)


def test_backends_agree_on_placement():
    from fogtopo import kernels

    t = generate_barabasi_albert(GeneratorParams(300, 2, 5))
    cls = classify(t)
    cfg = fog(3.0, [CAP5, CAP2], occupancy=1.5)
    results = []
    for name in kernels.available_backends():
        with kernels.using(name):
            results.append(place_fog_nodes(t, cls, cfg))
    assert all(r == results[0] for r in results)


def test_place_deterministic():
    t = generate_barabasi_albert(GeneratorParams(200, 2, 9))
    cls = classify(t)
    cfg = fog(4, [CAP5, CAP2], occupancy=2)
    assert place_fog_nodes(t, cls, cfg) == place_fog_nodes(t, cls, cfg)


@pytest.mark.parametrize("seed", range(8))
def test_saturation_shortcut_matches_full_count(seed, monkeypatch):
    from fogtopo.placement import GreedyLatencyPolicy

    rng = random.Random(seed)
    t = generate_barabasi_albert(GeneratorParams(rng.randint(10, 150), rng.randint(1, 3), seed))
    cls = classify(t)
    cfg = fog(rng.choice([6.0, 10.0, 50.0]), [CAP5, CAP2], occupancy=rng.choice([0.5, 2.0]))
    fast = place_fog_nodes(t, cls, cfg, trace=True)
    monkeypatch.setattr(GreedyLatencyPolicy, "_saturated", staticmethod(lambda *a: np.zeros(0, dtype=np.int64)))
    slow = place_fog_nodes(t, cls, cfg, trace=True)
    assert fast == slow
    assert [r.routers.tolist() for r in fast.trace] == [r.routers.tolist() for r in slow.trace]
