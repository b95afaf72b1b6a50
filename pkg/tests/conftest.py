from __future__ import annotations

from pathlib import Path

import pytest

from scalefit.series import MetricSeries, NormalizedSeries, SeriesPoint

DATA = Path(__file__).resolve().parents[1] / "src" / "scalefit" / "data"
POW2 = [2**k for k in range(10)]  # 1..512


def series_of(ns, values, label="y", unit="u") -> MetricSeries:
    return MetricSeries(label, unit, tuple(SeriesPoint(int(n), float(v), 0.0, 1) for n, v in zip(ns, values)))


def normalized_of(ns, values, base_n=1) -> NormalizedSeries:
    return NormalizedSeries(base_n, tuple((int(n), float(v)) for n, v in zip(ns, values)))


@pytest.fixture
def data_dir() -> Path:
    return DATA
