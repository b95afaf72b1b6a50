"""Series containers passed between ingestion, metrics, fitting and analysis."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np


@dataclass(frozen=True)
class SeriesPoint:
    n_cores: int
    mean: float
    stddev: float
    count: int  # 0 marks a synthesized (interpolated) point


@dataclass(frozen=True)
class MetricSeries:
    """Ordered per-core-count statistics of one metric."""

    label: str
    unit: str
    points: tuple[SeriesPoint, ...]

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        _check_increasing([p.n_cores for p in self.points])
        for p in self.points:
            if not math.isfinite(p.mean):
                raise ValueError(f"non-finite mean at N={p.n_cores}")
            if p.count < 0:
                raise ValueError(f"negative count at N={p.n_cores}")
            if p.stddev < 0 or (p.count <= 1 and p.stddev != 0):
                raise ValueError(f"invalid stddev {p.stddev} for count {p.count} at N={p.n_cores}")

    @property
    def n_cores(self) -> np.ndarray:
        return np.array([p.n_cores for p in self.points], dtype=np.int64)

    @property
    def values(self) -> np.ndarray:
        return np.array([p.mean for p in self.points], dtype=float)

    @property
    def counts(self) -> np.ndarray:
        return np.array([p.count for p in self.points], dtype=np.int64)

    def __len__(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class NormalizedSeries:
    """Values divided by the value at ``base_n``; the base point is exactly 1.

    ``counts`` carries replicate counts from the source series when known
    (0 for synthesized points); ``None`` means every point is observed once.
    """

    base_n: int
    points: tuple[tuple[int, float], ...]
    counts: tuple[int, ...] | None = None
    label: str = "capacity"

    def __post_init__(self):
        pts = tuple((int(n), float(v)) for n, v in self.points)
        object.__setattr__(self, "points", pts)
        if self.counts is not None:
            object.__setattr__(self, "counts", tuple(int(c) for c in self.counts))
            if len(self.counts) != len(pts):
                raise ValueError("counts length does not match points")
        _check_increasing([n for n, _ in pts])
        if dict(pts).get(self.base_n) != 1.0:
            raise ValueError(f"normalized series must contain ({self.base_n}, 1.0)")
        for n, v in pts:
            if not (v > 0 and math.isfinite(v)):
                raise ValueError(f"non-positive value {v} at N={n}")

    @property
    def n_cores(self) -> np.ndarray:
        return np.array([n for n, _ in self.points], dtype=np.int64)

    @property
    def values(self) -> np.ndarray:
        return np.array([v for _, v in self.points], dtype=float)

    def count_array(self) -> np.ndarray:
        if self.counts is None:
            return np.ones(len(self.points), dtype=np.int64)
        return np.array(self.counts, dtype=np.int64)

    def __len__(self) -> int:
        return len(self.points)


AnySeries = Union[MetricSeries, NormalizedSeries]


def series_counts(series: AnySeries) -> np.ndarray:
    if isinstance(series, MetricSeries):
        return series.counts
    return series.count_array()


def _check_increasing(ns: list[int]) -> None:
    for n in ns:
        if n < 1:
            raise ValueError(f"core count must be positive, got {n}")
    for prev, cur in zip(ns, ns[1:]):
        if cur <= prev:
            raise ValueError(f"core counts must be strictly increasing ({prev} then {cur})")
