"""Timing harness for edge identification and fog placement across AS sizes."""

from __future__ import annotations

import csv
import io
import logging
import time
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from fogtopo.classify import classify
from fogtopo.config import DEFAULT_FOG_CONFIG, FogConfig
from fogtopo.ingest import GeneratorParams, generate_barabasi_albert
from fogtopo.model import Topology
from fogtopo.placement import place_fog_nodes

logger = logging.getLogger(__name__)

DEFAULT_SIZES = (10, 100, 1000, 10000)
DEFAULT_SAMPLES = 5
DEFAULT_RUNS = 5
DEFAULT_THRESHOLDS = (2.0, 4.0, 8.0, 200.0)
PERCENTILES = (10, 25, 50, 75, 90)

CSV_FIELDS = ("stage", "size", "sample", "run", "threshold", "elapsed_ms")
SUMMARY_FIELDS = ("stage", "size", "threshold", "percentile", "elapsed_ms")


@dataclass(frozen=True)
class TimingRow:
    stage: str
    size: int
    sample: int
    run: int
    threshold: float | None
    elapsed_ms: float


def sample_seed(seed: int, size: int, sample: int) -> int:
    return (seed * 1_000_003 + size * 7919 + sample) % 2**64


def run_bench(
    sizes: Iterable[int] = DEFAULT_SIZES,
    samples: int = DEFAULT_SAMPLES,
    runs: int = DEFAULT_RUNS,
    thresholds: Iterable[float] = DEFAULT_THRESHOLDS,
    seed: int = 0,
    attachment_edges: int = 2,
    fog: FogConfig = DEFAULT_FOG_CONFIG,
) -> list[TimingRow]:
    """Time classification and per-threshold placement on generated ASs.

    Topologies, their adjacency arrays and the classification fed to
    placement are built outside the timed region.
    """
    sizes, thresholds = list(sizes), list(thresholds)
    if samples < 1 or runs < 1 or not sizes:
        raise ValueError("sizes, samples and runs must all be at least 1")
    rows = []
    for size in sizes:
        m = min(attachment_edges, size - 1) if size > 1 else 1
        for sample in range(samples):
            params = GeneratorParams(size, max(1, m), sample_seed(seed, size, sample))
            topo = generate_barabasi_albert(params) if size > 1 else _single(params)
            # adjacency arrays belong to the pre-built topology, not the timed step
            topo.csr(intra_as=True)
            topo.csr(intra_as=False)
            classification = classify(topo)
            for run in range(runs):
                t0 = time.perf_counter()
                classify(topo)
                rows.append(TimingRow("classify", size, sample, run, None,
                                      (time.perf_counter() - t0) * 1000))
            for T in thresholds:
                cfg = fog.with_threshold(T)
                for run in range(runs):
                    t0 = time.perf_counter()
                    place_fog_nodes(topo, classification, cfg)
                    rows.append(TimingRow("placement", size, sample, run, float(T),
                                          (time.perf_counter() - t0) * 1000))
            logger.info("size=%d sample=%d done", size, sample)
    return rows


def _single(params: GeneratorParams) -> Topology:
    topo = Topology()
    topo.add_router(0, params.as_id)
    return topo


def percentile_summary(rows: list[TimingRow]) -> list[tuple[str, int, float | None, int, float]]:
    """10/25/50/75/90th percentiles of elapsed time per (stage, size, threshold)."""
    groups: dict[tuple, list[float]] = {}
    for r in rows:
        groups.setdefault((r.stage, r.size, r.threshold), []).append(r.elapsed_ms)
    out = []
    for (stage, size, threshold), values in sorted(
        groups.items(), key=lambda kv: (kv[0][0], kv[0][1], kv[0][2] or 0.0)
    ):
        pct = np.percentile(np.asarray(values), PERCENTILES)
        out.extend((stage, size, threshold, p, float(v)) for p, v in zip(PERCENTILES, pct))
    return out


def _fmt_threshold(t: float | None) -> str:
    return "" if t is None else f"{t:g}"


def rows_to_csv(rows: list[TimingRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for r in rows:
        w.writerow([r.stage, r.size, r.sample, r.run, _fmt_threshold(r.threshold), f"{r.elapsed_ms:.4f}"])
    return buf.getvalue()


def summary_to_csv(summary) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SUMMARY_FIELDS)
    for stage, size, threshold, p, v in summary:
        w.writerow([stage, size, _fmt_threshold(threshold), p, f"{v:.4f}"])
    return buf.getvalue()
