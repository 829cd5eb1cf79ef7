"""Command-line entry point.

Data goes to ``-o`` paths (``-`` for stdout); logs and summaries go to stderr.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from fogtopo import __version__, bench, kernels
from fogtopo.classify import classify
from fogtopo.config import DEFAULT_FOG_CONFIG, ConfigError, FogConfig, load_fog_config
from fogtopo.export import ExportError, export_deployment, export_dot, export_interchange
from fogtopo.export.interchange import parse_interchange
from fogtopo.ingest import (
    CaidaDatasetPaths,
    GeneratorParams,
    filter_as,
    generate_barabasi_albert,
    parse_caida,
    read_brite,
    select_as_by_size,
)
from fogtopo.model import ParseError, TopologyError
from fogtopo.pipeline import (
    EXIT_CLASSIFY,
    EXIT_CONFIG,
    EXIT_INGEST,
    EXIT_OUTPUT,
    EXIT_PLACEMENT,
    OutputSpec,
    PipelineConfig,
    StageError,
    load_pipeline_config,
    run_pipeline,
    write_output,
)
from fogtopo.placement import PlacementError, place_fog_nodes

logger = logging.getLogger("fogtopo")


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _floats(n):
    return dict(nargs=n, type=float, metavar=("MIN", "MAX") if n == 2 else None)


def _emit(path: str, text: str) -> None:
    try:
        write_output(path, text)
    except OSError as exc:
        raise CliError(EXIT_OUTPUT, f"cannot write {path}: {exc}") from None


def _read_doc(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
        return parse_interchange(text)
    except (OSError, ParseError) as exc:
        raise CliError(EXIT_INGEST, f"{path}: {exc}") from None


def _fog(path: str | None, fallback: FogConfig | None = None) -> FogConfig:
    if path is None:
        if fallback is None:
            raise CliError(EXIT_CONFIG, "a fog configuration (--fog) is required")
        return fallback
    try:
        return load_fog_config(path)
    except (OSError, ConfigError) as exc:
        raise CliError(EXIT_CONFIG, str(exc)) from None


def _narrow(topo, args):
    if getattr(args, "as_id", None) is not None:
        return filter_as(topo, args.as_id)
    if getattr(args, "target_n", None) is not None:
        matches = select_as_by_size(topo, args.target_n, args.tolerance)
        if not matches:
            raise CliError(EXIT_INGEST, f"no AS within {args.tolerance:.0%} of n={args.target_n}")
        return filter_as(topo, matches[0])
    return topo


def cmd_generate(args) -> int:
    params = GeneratorParams(
        router_count=args.routers,
        attachment_edges=args.attachment,
        seed=args.seed,
        latency_range=tuple(args.latency_range),
        bandwidth_range=tuple(args.bandwidth_range),
        as_id=args.as_id,
    )
    try:
        topo = generate_barabasi_albert(params)
    except TopologyError as exc:
        raise CliError(EXIT_CONFIG, str(exc)) from None
    meta = {"provenance": {"source": "generate", "generator": "barabasi-albert",
                           "params": params.as_dict()}}
    _emit(args.output, export_interchange(topo, metadata=meta))
    return 0


def cmd_import_brite(args) -> int:
    try:
        topo = _narrow(read_brite(args.file), args)
    except (OSError, TopologyError) as exc:
        raise CliError(EXIT_INGEST, str(exc)) from None
    meta = {"provenance": {"source": "brite", "file": Path(args.file).name}}
    _emit(args.output, export_interchange(topo, metadata=meta))
    return 0


def cmd_import_caida(args) -> int:
    paths = CaidaDatasetPaths(Path(args.nodes), Path(args.links), Path(args.as_file),
                              Path(args.geo) if args.geo else None)
    try:
        topo = parse_caida(paths, args.default_latency, args.default_bandwidth)
        if args.list_as:
            target = args.target_n
            sizes = topo.as_sizes()
            ids = select_as_by_size(topo, target, args.tolerance) if target else list(sizes)
            _emit(args.output, "".join(f"{a}\t{sizes[a]}\n" for a in ids))
            return 0
        topo = _narrow(topo, args)
    except (OSError, TopologyError) as exc:
        raise CliError(EXIT_INGEST, str(exc)) from None
    meta = {"provenance": {"source": "caida", "links_file": paths.links_file.name,
                           "geo": paths.geo_file is not None}}
    _emit(args.output, export_interchange(topo, metadata=meta))
    return 0


def cmd_enhance(args) -> int:
    doc = _read_doc(args.input)
    try:
        classification = classify(doc.topology, args.degree_mode)
    except (TopologyError, ValueError) as exc:
        raise CliError(EXIT_CLASSIFY, str(exc)) from None
    placement = None
    meta = dict(doc.metadata)
    if not args.classify_only:
        fog = _fog(args.fog, DEFAULT_FOG_CONFIG if args.default_fog else None)
        try:
            placement = place_fog_nodes(doc.topology, classification, fog,
                                        cross_as_paths=args.cross_as_paths, edge_only=args.edge_only)
        except PlacementError as exc:
            raise CliError(EXIT_PLACEMENT,
                           f"{exc}; uncovered: {', '.join(map(str, exc.uncovered[:20]))}") from None
        meta["fog_config"] = fog.to_dict()
        logger.info("placed %d fog nodes on %d routers, total cost %g",
                    placement.node_count, len(placement.assignments), placement.total_cost)
    _emit(args.output, export_interchange(doc.topology, classification, placement, meta))
    return 0


def cmd_export(args) -> int:
    doc = _read_doc(args.input)
    try:
        if args.format == "interchange":
            text = export_interchange(doc.topology, doc.classification, doc.placement, doc.metadata)
        elif args.format == "dot":
            text = export_dot(doc.topology, doc.classification, doc.placement)
        else:
            if doc.classification is None or doc.placement is None:
                raise CliError(EXIT_CONFIG, "deployment export needs an enhanced document")
            stored = doc.metadata.get("fog_config")
            fog = _fog(args.fog, FogConfig.from_dict(stored) if stored else None)
            text = export_deployment(doc.topology, doc.classification, doc.placement, fog,
                                     doc.metadata.get("provenance"))
    except ExportError as exc:
        raise CliError(EXIT_OUTPUT, str(exc)) from None
    _emit(args.output, text)
    return 0


def _pipeline_config(args) -> PipelineConfig:
    if args.config:
        return load_pipeline_config(args.config)
    outputs = [OutputSpec(fmt, path) for fmt, path in (
        ("interchange", args.out_interchange),
        ("deployment", args.out_deployment),
        ("dot", args.out_dot),
    ) if path]
    cfg = PipelineConfig(fog=_fog(args.fog, DEFAULT_FOG_CONFIG), outputs=outputs,
                         degree_mode=args.degree_mode, cross_as_paths=args.cross_as_paths,
                         edge_only=args.edge_only)
    if args.generate:
        cfg.generate = GeneratorParams(args.generate, args.attachment, args.seed)
    elif args.brite:
        cfg.brite = Path(args.brite)
    elif args.caida_nodes:
        cfg.caida = CaidaDatasetPaths(Path(args.caida_nodes), Path(args.caida_links),
                                      Path(args.caida_as),
                                      Path(args.caida_geo) if args.caida_geo else None)
    if args.target_n:
        cfg.as_filter = {"target_n": args.target_n, "tolerance": args.tolerance}
    cfg.validate()
    return cfg


def cmd_pipeline(args) -> int:
    try:
        cfg = _pipeline_config(args)
    except (ConfigError, TopologyError, KeyError, OSError) as exc:
        raise CliError(EXIT_CONFIG, str(exc)) from None
    try:
        result = run_pipeline(cfg)
    except StageError as exc:
        raise CliError(exc.code, str(exc)) from None
    c, p = result.classification, result.placement
    print(
        f"routers={len(result.topology)} edge={len(c.edge)} backbone={len(c.backbone)} "
        f"fog_nodes={p.node_count} total_cost={p.total_cost:g} "
        + " ".join(f"{k}_ms={v * 1000:.1f}" for k, v in result.timings.items()),
        file=sys.stderr,
    )
    return 0


def cmd_bench(args) -> int:
    fog = _fog(args.fog, DEFAULT_FOG_CONFIG)
    if args.backend:
        kernels.set_backend(args.backend)
    rows = bench.run_bench(args.sizes, args.samples, args.runs, args.thresholds, args.seed,
                           args.attachment, fog)
    _emit(args.output, bench.rows_to_csv(rows))
    summary = bench.summary_to_csv(bench.percentile_summary(rows))
    if args.summary:
        _emit(args.summary, summary)
    else:
        sys.stderr.write(summary)
    return 0


def _add_as_selection(p) -> None:
    p.add_argument("--as-id", type=int, help="keep only this AS")
    p.add_argument("--target-n", type=int, help="keep the first AS whose size is near N")
    p.add_argument("--tolerance", type=float, default=0.05, help="relative size tolerance")


def _add_placement_opts(p) -> None:
    p.add_argument("--degree-mode", choices=("total", "intra"), default="total",
                   help="degree used for the above-average rule")
    p.add_argument("--cross-as-paths", action="store_true",
                   help="allow latency paths through other ASs")
    p.add_argument("--edge-only", action="store_true", help="only edge routers host fog nodes")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fogtopo", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="count", default=0,
                        help="log progress to stderr (-vv for debug)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", parents=[common], help="generate a Barabási–Albert AS")
    p.add_argument("-n", "--routers", type=int, required=True)
    p.add_argument("-m", "--attachment", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--latency-range", **_floats(2), default=[0.5, 2.5])
    p.add_argument("--bandwidth-range", **_floats(2), default=[100.0, 1000.0])
    p.add_argument("--as-id", type=int, default=0)
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("import-brite", parents=[common], help="convert a BRITE export")
    p.add_argument("file")
    _add_as_selection(p)
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_import_brite)

    p = sub.add_parser("import-caida", parents=[common], help="convert CAIDA ITDK files")
    p.add_argument("--nodes", required=True)
    p.add_argument("--links", required=True)
    p.add_argument("--as", dest="as_file", required=True)
    p.add_argument("--geo")
    p.add_argument("--default-latency", type=float, default=1.0, help="ms per link without geo")
    p.add_argument("--default-bandwidth", type=float, default=1000.0, help="Mbps per link")
    p.add_argument("--list-as", action="store_true", help="print AS ids and sizes instead")
    _add_as_selection(p)
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_import_caida)

    p = sub.add_parser("enhance", parents=[common], help="identify edge routers and place fog nodes")
    p.add_argument("input", help="interchange document ('-' for stdin)")
    p.add_argument("--fog", help="fog configuration JSON")
    p.add_argument("--default-fog", action="store_true", help="use the built-in fog configuration")
    p.add_argument("--classify-only", action="store_true")
    _add_placement_opts(p)
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_enhance)

    p = sub.add_parser("export", parents=[common], help="render an interchange document")
    p.add_argument("input")
    p.add_argument("--format", choices=("interchange", "deployment", "dot"), required=True)
    p.add_argument("--fog", help="fog configuration (defaults to the one stored by enhance)")
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("pipeline", parents=[common], help="ingest, enhance and export in one run")
    p.add_argument("--config", help="pipeline configuration JSON (overrides other flags)")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--generate", type=int, metavar="N", help="generate an AS of N routers")
    src.add_argument("--brite")
    src.add_argument("--caida-nodes")
    p.add_argument("--caida-links")
    p.add_argument("--caida-as")
    p.add_argument("--caida-geo")
    p.add_argument("-m", "--attachment", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--fog")
    p.add_argument("--target-n", type=int)
    p.add_argument("--tolerance", type=float, default=0.05)
    _add_placement_opts(p)
    p.add_argument("--out-interchange")
    p.add_argument("--out-deployment")
    p.add_argument("--out-dot")
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("bench", parents=[common], help="time classification and placement")
    p.add_argument("--sizes", type=int, nargs="+", default=list(bench.DEFAULT_SIZES))
    p.add_argument("--samples", type=int, default=bench.DEFAULT_SAMPLES)
    p.add_argument("--runs", type=int, default=bench.DEFAULT_RUNS)
    p.add_argument("--thresholds", type=float, nargs="+", default=list(bench.DEFAULT_THRESHOLDS))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-m", "--attachment", type=int, default=2)
    p.add_argument("--fog")
    p.add_argument("--backend", choices=kernels.available_backends())
    p.add_argument("--summary", help="write the percentile summary here instead of stderr")
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except CliError as exc:
        print(f"fogtopo {args.command}: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
