"""Speedup, scaleup, efficiency, scalability ratio and model cost."""

from __future__ import annotations

from scalefit.errors import InputError
from scalefit.series import MetricSeries, NormalizedSeries

HOURS_PER_DAY = 24.0


def _positive(name: str, x: float) -> None:
    if not x > 0:
        raise InputError(f"{name} must be positive, got {x!r}")


def speedup(t_base: float, t_n: float) -> float:
    """Fixed-size speedup ``t_base / t_n``."""
    _positive("t_base", t_base)
    _positive("t_n", t_n)
    return t_base / t_n


def efficiency(capacity_or_speedup: float, n_cores: int) -> float:
    """Speedup (or scaling capacity) per core; 1 is ideal."""
    return capacity_or_speedup / n_cores


def scalability_ratio(e_n2: float, e_n1: float) -> float:
    """Efficiency at the larger core count over efficiency at the smaller one."""
    _positive("e_n2", e_n2)
    _positive("e_n1", e_n1)
    return e_n2 / e_n1


def model_cost(n_cores: int, throughput: float) -> float:
    """Processor-hours per simulated unit, given throughput in units per day."""
    _positive("throughput", throughput)
    return n_cores * HOURS_PER_DAY / throughput


def _base_value(series: MetricSeries, base_n: int) -> float:
    for p in series.points:
        if p.n_cores == base_n:
            if not p.mean > 0:
                raise InputError(f"base point N={base_n} has non-positive value {p.mean}")
            return p.mean
    raise InputError(f"base point absent: no N={base_n} in series {series.label!r}")


def scaleup(series: MetricSeries, base_n: int) -> NormalizedSeries:
    """Scaling capacity: throughput at N divided by throughput at ``base_n``.

    ``base_n`` need not be 1; when no serial run exists the smallest
    feasible run serves as the reference.
    """
    ref = _base_value(series, base_n)
    pts = tuple((p.n_cores, p.mean / ref) for p in series.points)
    return NormalizedSeries(base_n, pts, tuple(p.count for p in series.points), "capacity")


def speedup_series(series: MetricSeries, base_n: int) -> NormalizedSeries:
    """Speedup of a time-like series (lower is better) relative to ``base_n``."""
    ref = _base_value(series, base_n)
    pts = []
    for p in series.points:
        _positive(f"{series.label} at N={p.n_cores}", p.mean)
        pts.append((p.n_cores, speedup(ref, p.mean)))
    return NormalizedSeries(base_n, tuple(pts), tuple(p.count for p in series.points), "speedup")
