"""Decisions derived from fits: saturation, recommended core count, bottleneck class."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Literal, Union

from scalefit.errors import InputError
from scalefit.fitting import PowerLawFit, SuperSerialFit
from scalefit.ingest import BreakdownRecord
from scalefit.metrics import efficiency, scalability_ratio
from scalefit.series import AnySeries, NormalizedSeries

Rationale = Literal["power-fit-saturation", "superserial-nc", "efficiency-floor"]
Bound = Literal["cpu-bound", "mpi-bound", "io-bound"]

DEFAULT_THRESHOLD = 0.10


@dataclass(frozen=True)
class SaturationResult:
    saturation_n: int | None
    relative_deviation_at: tuple[tuple[int, float], ...]
    threshold: float


@dataclass(frozen=True)
class Recommendation:
    optimal_n: int
    rationale: Rationale
    supporting: tuple[str, ...]
    warnings: tuple[str, ...] = field(default=())


@dataclass(frozen=True)
class BoundClass:
    n_cores: int
    bound: Bound


@dataclass(frozen=True)
class EfficiencyRow:
    n_cores: int
    efficiency: float
    scalability_ratio: float | None  # vs previous tested N; None on the first row


def detect_saturation(
    series: AnySeries, fit: PowerLawFit, threshold: float = DEFAULT_THRESHOLD
) -> SaturationResult:
    """Find where observed values fall persistently below the power fit.

    The saturation point is the smallest tested N whose relative deviation
    ``(observed - fitted) / fitted`` is below ``-threshold`` and stays there
    for every larger tested N.
    """
    if not threshold > 0:
        raise InputError(f"threshold must be positive, got {threshold}")
    ns = series.n_cores
    obs = series.values
    fitted = fit.predict(ns.astype(float))
    dev = (obs - fitted) / fitted

    saturation = None
    for i in range(len(ns) - 1, -1, -1):
        if dev[i] < -threshold:
            saturation = int(ns[i])
        else:
            break
    return SaturationResult(
        saturation_n=saturation,
        relative_deviation_at=tuple((int(n), float(d)) for n, d in zip(ns, dev)),
        threshold=threshold,
    )


def recommend(
    fits: Sequence[Union[PowerLawFit, SuperSerialFit]],
    saturation: SaturationResult,
    efficiency_floor: float | None = None,
    capacity: NormalizedSeries | None = None,
) -> Recommendation:
    """Pick a core count, preferring evidence from observed data over model extrapolation.

    Order: last tested N before saturation; else the integer super-serial
    optimum; else the largest N meeting ``efficiency_floor`` (needs
    ``capacity``); else the largest tested N, with a warning.
    """
    if not fits:
        raise InputError("no fits supplied")
    tested = [n for n, _ in saturation.relative_deviation_at]
    power = [f for f in fits if isinstance(f, PowerLawFit)]
    superserial = [f for f in fits if isinstance(f, SuperSerialFit)]

    if saturation.saturation_n is not None:
        below = [n for n in tested if n < saturation.saturation_n]
        if below:
            return Recommendation(max(below), "power-fit-saturation", ("power_fit",))
        return Recommendation(
            min(tested),
            "power-fit-saturation",
            ("power_fit",),
            ("saturated from the smallest tested N; no earlier point to recommend",),
        )

    if superserial:
        return Recommendation(superserial[0].n_c_int, "superserial-nc", ("superserial_fit",))

    if efficiency_floor is not None:
        if capacity is None:
            raise InputError("efficiency floor needs the capacity series")
        ok = [n for n, v in capacity.points if efficiency(v, n) >= efficiency_floor]
        if ok:
            return Recommendation(max(ok), "efficiency-floor", ("capacity",))
        return Recommendation(
            min(n for n, _ in capacity.points),
            "efficiency-floor",
            ("capacity",),
            (f"no tested N reaches efficiency {efficiency_floor:g}; smallest N returned",),
        )

    if not tested:
        raise InputError("no tested core counts")
    return Recommendation(
        max(tested),
        "power-fit-saturation",
        tuple("power_fit" for _ in power[:1]),
        ("no saturation observed; largest tested N returned",),
    )


_PRIORITY = (("cpu_pct", "cpu-bound"), ("mpi_pct", "mpi-bound"), ("io_pct", "io-bound"))


def classify_bound(record: BreakdownRecord) -> BoundClass:
    """Class of the largest time share; ties go to cpu, then mpi, then io."""
    best_field, best_class = _PRIORITY[0]
    for fld, cls in _PRIORITY[1:]:
        if getattr(record, fld) > getattr(record, best_field):
            best_field, best_class = fld, cls
    return BoundClass(record.n_cores, best_class)


def efficiency_table(capacity: NormalizedSeries) -> list[EfficiencyRow]:
    if len(capacity) < 2:
        raise InputError("efficiency table needs at least 2 points")
    rows = []
    prev = None
    for n, v in capacity.points:
        e = efficiency(v, n)
        sc = None if prev is None else scalability_ratio(e, prev)
        rows.append(EfficiencyRow(n, e, sc))
        prev = e
    return rows


def scalability_between(capacity: NormalizedSeries, n1: int, n2: int) -> float:
    """Scalability ratio for an arbitrary tested pair ``n1 < n2``."""
    if not n2 > n1:
        raise InputError(f"need n2 > n1, got n1={n1}, n2={n2}")
    values = dict(capacity.points)
    missing = [n for n in (n1, n2) if n not in values]
    if missing:
        raise InputError(f"N={missing[0]} not in capacity series")
    return scalability_ratio(efficiency(values[n2], n2), efficiency(values[n1], n1))
