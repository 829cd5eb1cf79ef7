from __future__ import annotations

import csv
import io

import numpy as np
import pytest

from fogtopo import bench


def test_defaults():
    assert bench.DEFAULT_SIZES == (10, 100, 1000, 10000)
    assert (bench.DEFAULT_SAMPLES, bench.DEFAULT_RUNS) == (5, 5)
    assert bench.DEFAULT_THRESHOLDS == (2.0, 4.0, 8.0, 200.0)
    assert bench.PERCENTILES == (10, 25, 50, 75, 90)


def test_minimal_run_two_rows():
    rows = bench.run_bench([10], 1, 1, [2.0])
    assert [(r.stage, r.threshold) for r in rows] == [("classify", None), ("placement", 2.0)]


@pytest.mark.parametrize("sizes, samples, runs, thresholds", [([1, 10], 2, 3, [2.0, 8.0]), ([20], 1, 2, [4.0])])
def test_row_count(sizes, samples, runs, thresholds):
    rows = bench.run_bench(sizes, samples, runs, thresholds)
    assert len(rows) == len(sizes) * samples * runs * (1 + len(thresholds))


def test_rejects_empty():
    with pytest.raises(ValueError):
        bench.run_bench([10], 0, 1, [2.0])


def test_percentile_summary_of_25_values():
    rows = [bench.TimingRow("classify", 10, s, r, None, float(s * 5 + r)) for s in range(5) for r in range(5)]
    summary = bench.percentile_summary(rows)
    assert len(summary) == 5
    assert [p for *_, p, _ in summary] == list(bench.PERCENTILES)
    assert [v for *_, v in summary] == pytest.approx(np.percentile(np.arange(25.0), bench.PERCENTILES).tolist())


def test_csv_shapes():
    rows = bench.run_bench([10], 1, 2, [2.0])
    parsed = list(csv.DictReader(io.StringIO(bench.rows_to_csv(rows))))
    assert list(parsed[0]) == list(bench.CSV_FIELDS)
    assert parsed[0]["threshold"] == "" and parsed[-1]["threshold"] == "2"
    summary = list(csv.DictReader(io.StringIO(bench.summary_to_csv(bench.percentile_summary(rows)))))
    assert len(summary) == 10


def test_sample_seeds_distinct():
    seeds = {bench.sample_seed(0, size, s) for size in bench.DEFAULT_SIZES for s in range(5)}
    assert len(seeds) == 20
