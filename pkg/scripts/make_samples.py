#!/usr/bin/env python3
"""Regenerate the synthetic sample datasets under src/scalefit/data/.

None of these are measurements. They mimic a climate model at two
resolutions (LowRes/HighRes) and a molecular-dynamics code, with power-law
throughput, a saturating tail and six replicates per core count.
"""

from __future__ import annotations

from pathlib import Path

from scalefit.ingest import RunRecord, SeriesPoint, write_runs_csv, write_series_csv
from scalefit.series import MetricSeries

DATA = Path(__file__).resolve().parents[1] / "src" / "scalefit" / "data"
SIM_DAYS = 5.0
JITTER = (-0.010, 0.006, -0.002, 0.002, -0.006, 0.010)  # zero-mean replicate noise


def _runs(grid, rate_at, init_at, replicates_at):
    records = []
    for n in grid:
        for r in range(replicates_at(n)):
            compute = round(SIM_DAYS * rate_at(n) * (1 + JITTER[r]), 2)
            records.append(RunRecord(n, r, round(init_at(n) * (1 + JITTER[-1 - r]), 2), compute, 2.0, SIM_DAYS))
    return records


def lowres():
    grid = [2**k for k in range(11)]

    def rate(n):  # s per simulated day
        base = 1600.0 / n**0.77
        return base if n <= 512 else 1.15 * 1600.0 / 512**0.77

    def init(n):
        return 110.0 / n**0.5 if n <= 64 else 14.0 * (n / 64) ** 0.6

    return _runs(grid, rate, init, lambda n: 1 if n == 1024 else 6)


def highres():
    grid = [32 * 2**k for k in range(7)]

    def rate(n):
        y = 365 * 1.9e-3 * n**0.91  # simulated days per day
        if n == 2048:
            y = 365 * 1.9e-3 * 1024**0.91 * 1.05
        return 86400.0 / y

    return _runs(grid, rate, lambda n: 300.0 + 0.05 * n, lambda n: 6)


def desmond():
    ns = [1, 2, 8, 16, 32, 48, 96, 144, 192, 256]
    b = 2.1  # ns/day on one core
    pts = []
    for n in ns:
        y = b * n**0.56 if n <= 96 else b * 96**0.56 * (0.98 if n < 256 else 0.93)
        pts.append(SeriesPoint(n, round(y, 4), 0.0, 1))
    return MetricSeries("throughput", "ns/day", tuple(pts))


BREAKDOWN = """n_cores,cpu_pct,mpi_pct,io_pct
1,99.5,0,0.5
2,95,4.5,0.5
4,90,9.4,0.6
8,83,16.3,0.7
16,75,24.2,0.8
32,68,31.1,0.9
64,62,37,1
"""


def main():
    DATA.mkdir(parents=True, exist_ok=True)
    (DATA / "lowres_runs.csv").write_bytes(write_runs_csv(lowres()))
    (DATA / "highres_runs.csv").write_bytes(write_runs_csv(highres()))
    (DATA / "desmond_throughput.csv").write_bytes(write_series_csv(desmond()))
    (DATA / "lowres_breakdown.csv").write_text(BREAKDOWN)
    (DATA / "lowres_config.json").write_text(
        '{\n  "fit_range": [1, 512],\n  "superserial": true\n}\n'
    )


if __name__ == "__main__":
    main()
