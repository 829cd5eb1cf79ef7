from __future__ import annotations

import json
import random

import pytest

from conftest import GOLDEN, build, fog
from fogtopo.classify import classify
from fogtopo.config import FogNodeType
from fogtopo.export import (
    ExportError,
    export_deployment,
    export_dot,
    export_interchange,
    parse_interchange,
)
from fogtopo.export.deployment import HOST_LINK_LATENCY_MS, deployment_document
from fogtopo.ingest import GeneratorParams, generate_barabasi_albert
from fogtopo.model import ParseError, RouterClassification
from fogtopo.placement import Placement, place_fog_nodes

TYPE_A = FogNodeType("A", 4, 2.0, image="fog/a:1", memory_mb=256, cpu_share=0.5)


# --- interchange ---------------------------------------------------------------

def test_empty_topology_document():
    doc = json.loads(export_interchange(build([])))
    assert doc == {
        "schema_version": 1,
        "routers": [],
        "links": [],
        "classified": False,
        "placement": None,
        "metadata": {},
    }


def test_export_twice_identical():
    t = build([(0, 1, 2.0, 1000.0)])
    assert export_interchange(t) == export_interchange(t)


def test_canonical_form():
    text = export_interchange(build([(0, 1, 0.1 + 0.2, 10.0)]))
    assert text.endswith("}\n")
    assert '"latency_ms": 0.30000000000000004' in text
    assert text == json.dumps(json.loads(text), sort_keys=True, indent=2) + "\n"


def test_round_trip_full(path3):
    cls = classify(path3)
    p = place_fog_nodes(path3, cls, fog(4))
    doc = parse_interchange(export_interchange(path3, cls, p, {"note": "x"}))
    assert doc.topology == path3
    assert doc.classification == cls
    assert doc.placement == p
    assert doc.metadata == {"note": "x"}


def test_round_trip_topology_only():
    t = generate_barabasi_albert(GeneratorParams(50, 2, 4))
    doc = parse_interchange(export_interchange(t))
    assert doc.topology == t
    assert doc.classification is None and doc.placement is None


def test_roles_embedded(path3):
    doc = json.loads(export_interchange(path3, classify(path3)))
    assert [r["role"] for r in doc["routers"]] == ["edge", "backbone", "edge"]
    assert doc["classified"] is True


def test_dangling_classification_rejected():
    t = build([(0, 1, 1.0)])
    with pytest.raises(ExportError, match="7"):
        export_interchange(t, RouterClassification(frozenset({7}), frozenset({0, 1})))


def test_unclassified_router_rejected():
    t = build([(0, 1, 1.0)])
    with pytest.raises(ExportError, match="1"):
        export_interchange(t, RouterClassification(frozenset(), frozenset({0})))


def test_dangling_placement_rejected():
    t = build([(0, 1, 1.0)])
    p = Placement({9: (TYPE_A,)}, 2.0, {0: 9})
    with pytest.raises(ExportError, match="9"):
        export_interchange(t, classify(t), p)


def test_cover_target_must_host_fog():
    t = build([(0, 1, 1.0)])
    p = Placement({0: (TYPE_A,)}, 2.0, {1: 1})
    with pytest.raises(ExportError, match="1"):
        export_interchange(t, classify(t), p)


@pytest.mark.parametrize(
    "text, needle",
    [
        ("[1, 2]", "object"),
        ("{not json", "JSON"),
        ('{"schema_version": 99}', "schema_version"),
        ('{"schema_version": 1, "routers": [{"id": 0}], "links": []}', "as"),
    ],
)
def test_parse_interchange_errors(text, needle):
    with pytest.raises(ParseError, match=needle):
        parse_interchange(text)


# --- deployment ------------------------------------------------------------------

def test_deployment_path_single_host(path3):
    cls = classify(path3)
    cfg = fog(4)
    doc = deployment_document(path3, cls, place_fog_nodes(path3, cls, cfg), cfg)
    assert len(doc["switches"]) == 3 and len(doc["links"]) == 2
    assert [(h["id"], h["router"]) for h in doc["fog_hosts"]] == [("fog-1-0", 1)]
    assert doc["fog_hosts"][0]["link"] == {"latency_ms": HOST_LINK_LATENCY_MS, "bandwidth_mbps": 100.0}
    assert doc["clients_per_edge"] == 1.0
    assert doc["links"][0] == {"a": 0, "b": 1, "latency_ms": 3.0, "bandwidth_mbps": 100.0}


def test_deployment_two_hosts_same_router():
    t = build([(0, 1, 1.0, 50.0), (0, 2, 1.0, 300.0)])
    cls = RouterClassification(frozenset({1, 2}), frozenset({0}))
    p = Placement({0: (TYPE_A, TYPE_A)}, 4.0, {0: 0})
    cfg = fog(4, [TYPE_A])
    hosts = deployment_document(t, cls, p, cfg)["fog_hosts"]
    assert [h["id"] for h in hosts] == ["fog-0-0", "fog-0-1"]
    assert {h["router"] for h in hosts} == {0}
    assert hosts[0]["memory_mb"] == 256 and hosts[0]["cpu_share"] == 0.5
    assert hosts[0]["link"]["bandwidth_mbps"] == 300.0


def test_deployment_no_edges():
    t = build([(0, 1, 1.0)])
    cls = RouterClassification(frozenset({0, 1}), frozenset())
    doc = deployment_document(t, cls, Placement(), fog(4))
    assert doc["fog_hosts"] == [] and doc["clients"] == []


def test_deployment_incomplete_rejected(path3):
    cls = classify(path3)
    p = Placement({0: (TYPE_A,)}, 2.0, {0: 0})
    with pytest.raises(ExportError, match="uncovered: 2"):
        export_deployment(path3, cls, p, fog(4))


def test_deployment_host_count_matches_multisets():
    t = generate_barabasi_albert(GeneratorParams(120, 2, 8))
    cls = classify(t)
    cfg = fog(3, [FogNodeType("s", 2, 1.0), FogNodeType("l", 5, 2.0)], occupancy=3)
    p = place_fog_nodes(t, cls, cfg)
    doc = json.loads(export_deployment(t, cls, p, cfg, {"run": 1}))
    assert len(doc["fog_hosts"]) == p.node_count
    switch_ids = {s["id"] for s in doc["switches"]}
    assert all(h["router"] in switch_ids for h in doc["fog_hosts"])
    assert all(l["a"] in switch_ids and l["b"] in switch_ids for l in doc["links"])
    assert doc["metadata"]["config_digest"] == cfg.digest()
    assert doc["metadata"]["provenance"] == {"run": 1}


# --- DOT ---------------------------------------------------------------------------

def test_dot_single_router():
    assert export_dot(build([], n=1)) == "graph topology {\n  node [fontsize=10];\n  0;\n}\n"


def test_dot_star_shapes():
    t = build([(0, i, 1.5) for i in range(1, 4)])
    text = export_dot(t, classify(t))
    assert '  0 [shape=square, style=filled, fillcolor="#404040", fontcolor=white];' in text
    for leaf in (1, 2, 3):
        assert f'  {leaf} [shape=circle, style=filled, fillcolor="#b0b0b0"];' in text
    assert '  0 -- 1 [label="1.5 ms"];' in text


@pytest.mark.parametrize("T", [2, 4])
def test_dot_fig3_golden(path3, T):
    cls = classify(path3)
    text = export_dot(path3, cls, place_fog_nodes(path3, cls, fog(T)))
    assert text == (GOLDEN / f"fig3_T{T}.dot").read_text()


def test_dot_plural_tooltip():
    t = build([], n=1)
    p = Placement({0: (TYPE_A, TYPE_A)}, 4.0, {0: 0})
    assert 'tooltip="2 fog nodes"' in export_dot(t, RouterClassification(frozenset(), frozenset({0})), p)


def test_exporters_byte_stable():
    rng = random.Random(0)
    t = generate_barabasi_albert(GeneratorParams(60, 2, rng.randrange(2**32)))
    cls = classify(t)
    cfg = fog(4)
    p = place_fog_nodes(t, cls, cfg)
    for fn in (
        lambda: export_interchange(t, cls, p),
        lambda: export_deployment(t, cls, p, cfg),
        lambda: export_dot(t, cls, p),
    ):
        assert fn() == fn()
