"""End-to-end run: ingest, transform, classify, place, export."""

from __future__ import annotations

import json
import logging
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from fogtopo.classify import classify
from fogtopo.config import ConfigError, FogConfig, load_fog_config
from fogtopo.export import ExportError, export_deployment, export_dot, export_interchange
from fogtopo.ingest import (
    CaidaDatasetPaths,
    GeneratorParams,
    filter_as,
    generate_barabasi_albert,
    parse_caida,
    read_brite,
    select_as_by_size,
)
from fogtopo.model import RouterClassification, Topology, TopologyError
from fogtopo.placement import Placement, PlacementError, place_fog_nodes

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 3
EXIT_INGEST = 4
EXIT_CLASSIFY = 5
EXIT_PLACEMENT = 6
EXIT_OUTPUT = 7

FORMATS = ("interchange", "deployment", "dot")


class StageError(RuntimeError):
    def __init__(self, stage: str, code: int, message: str):
        super().__init__(f"{stage} stage failed: {message}")
        self.stage = stage
        self.code = code


@dataclass(frozen=True)
class OutputSpec:
    format: str
    path: str

    def __post_init__(self) -> None:
        if self.format not in FORMATS:
            raise ConfigError(f"unknown output format {self.format!r}; expected one of {FORMATS}")


@dataclass
class PipelineConfig:
    """Exactly one of ``generate``/``brite``/``caida`` must be set."""

    fog: FogConfig
    outputs: list[OutputSpec]
    generate: GeneratorParams | None = None
    brite: Path | None = None
    caida: CaidaDatasetPaths | None = None
    caida_default_latency: float = 1.0
    caida_default_bandwidth: float = 1000.0
    as_filter: dict[str, Any] | None = None
    degree_mode: str = "total"
    cross_as_paths: bool = False
    edge_only: bool = False

    def validate(self) -> None:
        sources = [s for s in (self.generate, self.brite, self.caida) if s is not None]
        if len(sources) != 1:
            raise ConfigError(f"exactly one source is required, got {len(sources)}")
        if not self.outputs:
            raise ConfigError("at least one output is required")

    @classmethod
    def from_dict(cls, doc: dict[str, Any], base: Path = Path(".")) -> "PipelineConfig":
        def resolve(p):
            p = Path(p)
            return p if p.is_absolute() else base / p

        src = doc.get("source") or {}
        if len(src) != 1:
            raise ConfigError("source must have exactly one of generate, brite, caida")
        fog = doc.get("fog")
        if isinstance(fog, str):
            fog_cfg = load_fog_config(resolve(fog))
        elif isinstance(fog, dict):
            fog_cfg = FogConfig.from_dict(fog)
        else:
            raise ConfigError("fog must be a fog configuration object or a path")
        outputs = [OutputSpec(o["format"], o["path"] if o["path"] == "-" else str(resolve(o["path"])))
                   for o in doc.get("outputs", [])]
        options = doc.get("options", {})
        cfg = cls(
            fog=fog_cfg,
            outputs=outputs,
            as_filter=doc.get("as_filter"),
            degree_mode=options.get("degree_mode", "total"),
            cross_as_paths=bool(options.get("cross_as_paths", False)),
            edge_only=bool(options.get("edge_only", False)),
        )
        if "generate" in src:
            g = dict(src["generate"])
            for key in ("latency_range", "bandwidth_range"):
                if key in g:
                    g[key] = tuple(g[key])
            try:
                cfg.generate = GeneratorParams(**g)
            except TypeError as exc:
                raise ConfigError(f"bad generate parameters: {exc}") from None
        elif "brite" in src:
            cfg.brite = resolve(src["brite"])
        elif "caida" in src:
            c = src["caida"]
            cfg.caida = CaidaDatasetPaths(
                resolve(c["nodes"]),
                resolve(c["links"]),
                resolve(c["as"]),
                resolve(c["geo"]) if c.get("geo") else None,
            )
            cfg.caida_default_latency = float(c.get("default_latency_ms", 1.0))
            cfg.caida_default_bandwidth = float(c.get("default_bandwidth_mbps", 1000.0))
        else:
            raise ConfigError(f"unknown source {next(iter(src))!r}")
        cfg.validate()
        return cfg

    def provenance(self) -> dict[str, Any]:
        if self.generate is not None:
            prov: dict[str, Any] = {"source": "generate", "generator": "barabasi-albert",
                                    "params": self.generate.as_dict()}
        elif self.brite is not None:
            prov = {"source": "brite", "file": Path(self.brite).name}
        else:
            prov = {"source": "caida", "links_file": Path(self.caida.links_file).name,
                    "geo": self.caida.geo_file is not None}
        if self.as_filter:
            prov["as_filter"] = dict(self.as_filter)
        return prov


def load_pipeline_config(path: str | Path) -> PipelineConfig:
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read pipeline config {path}: {exc}") from None
    return PipelineConfig.from_dict(doc, base=path.parent)


@dataclass
class PipelineResult:
    topology: Topology
    classification: RouterClassification
    placement: Placement
    timings: dict[str, float] = field(default_factory=dict)
    rendered: dict[str, str] = field(default_factory=dict)


def apply_as_filter(topology: Topology, as_filter: dict[str, Any] | None) -> Topology:
    if not as_filter:
        return topology
    if "as_id" in as_filter:
        return filter_as(topology, int(as_filter["as_id"]))
    matches = select_as_by_size(topology, int(as_filter["target_n"]),
                                float(as_filter.get("tolerance", 0.05)))
    pick = int(as_filter.get("pick", 0))
    if pick >= len(matches):
        raise TopologyError(
            f"no AS #{pick} within tolerance of n={as_filter['target_n']} ({len(matches)} found)"
        )
    logger.info("AS filter selected AS %d from %d candidates", matches[pick], len(matches))
    return filter_as(topology, matches[pick])


def load_source(config: PipelineConfig) -> Topology:
    if config.generate is not None:
        topo = generate_barabasi_albert(config.generate)
    elif config.brite is not None:
        topo = read_brite(config.brite)
    else:
        topo = parse_caida(config.caida, config.caida_default_latency, config.caida_default_bandwidth)
    return apply_as_filter(topo, config.as_filter)


def render(fmt: str, result: PipelineResult, config: PipelineConfig) -> str:
    meta = {"provenance": config.provenance(), "fog_config": config.fog.to_dict()}
    if fmt == "interchange":
        return export_interchange(result.topology, result.classification, result.placement, meta)
    if fmt == "deployment":
        return export_deployment(result.topology, result.classification, result.placement,
                                 config.fog, config.provenance())
    return export_dot(result.topology, result.classification, result.placement)


def write_output(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        return
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text(text, encoding="utf-8")


def run_pipeline(config: PipelineConfig) -> PipelineResult:
    """Run every stage in order; failures raise :class:`StageError` naming the stage."""
    config.validate()
    timings = {}

    t0 = time.perf_counter()
    try:
        topology = load_source(config)
    except (TopologyError, OSError) as exc:
        raise StageError("ingest", EXIT_INGEST, str(exc)) from exc
    timings["ingest"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    try:
        classification = classify(topology, config.degree_mode)
    except (TopologyError, ValueError) as exc:
        raise StageError("classify", EXIT_CLASSIFY, str(exc)) from exc
    timings["classify"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    try:
        placement = place_fog_nodes(topology, classification, config.fog,
                                    cross_as_paths=config.cross_as_paths, edge_only=config.edge_only)
    except PlacementError as exc:
        shown = ", ".join(map(str, exc.uncovered[:20]))
        raise StageError("placement", EXIT_PLACEMENT, f"{exc}; uncovered: {shown}") from exc
    timings["placement"] = time.perf_counter() - t0

    result = PipelineResult(topology, classification, placement, timings)
    t0 = time.perf_counter()
    for out in config.outputs:
        try:
            text = result.rendered.get(out.format) or render(out.format, result, config)
            result.rendered[out.format] = text
            write_output(out.path, text)
        except (ExportError, OSError) as exc:
            raise StageError("export", EXIT_OUTPUT, f"{out.path}: {exc}") from exc
    timings["export"] = time.perf_counter() - t0

    logger.info(
        "routers=%d links=%d edge=%d backbone=%d fog_nodes=%d fog_routers=%d total_cost=%g",
        len(topology), topology.n_links, len(classification.edge), len(classification.backbone),
        placement.node_count, len(placement.assignments), placement.total_cost,
    )
    logger.info("stage times: %s", ", ".join(f"{k}={v * 1000:.1f}ms" for k, v in timings.items()))
    return result
