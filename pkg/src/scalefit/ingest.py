"""Parse benchmark timing files and turn replicate runs into metric series."""

from __future__ import annotations

import csv
import io
import json
import math
import statistics
from collections import defaultdict
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from typing import BinaryIO, Literal, Union

import numpy as np

from scalefit.errors import InputError
from scalefit.series import AnySeries, MetricSeries, NormalizedSeries, SeriesPoint

SECONDS_PER_DAY = 86400.0

RUN_FIELDS = ("n_cores", "replicate", "init_s", "compute_s", "final_s", "simulated_units")
BREAKDOWN_FIELDS = ("n_cores", "cpu_pct", "mpi_pct", "io_pct")
SERIES_FIELDS = ("n_cores", "mean", "stddev", "count")

RunFormat = Literal["runs-csv", "runs-json"]
MetricName = Literal["init_s", "compute_s", "total_s", "compute_rate", "throughput"]
Source = Union[bytes, BinaryIO]

METRIC_UNITS = {
    "init_s": "s",
    "compute_s": "s",
    "total_s": "s",
    "compute_rate": "s/unit",
    "throughput": "units/day",
}


@dataclass(frozen=True)
class RunRecord:
    n_cores: int
    replicate: int
    init_s: float
    compute_s: float
    final_s: float
    simulated_units: float

    def __post_init__(self):
        if self.n_cores < 1:
            raise ValueError("non-positive core count")
        if self.replicate < 0:
            raise ValueError("negative replicate index")
        if not self.compute_s > 0:
            raise ValueError("non-positive compute_s")
        if not self.simulated_units > 0:
            raise ValueError("non-positive simulated_units")
        if self.init_s < 0 or self.final_s < 0:
            raise ValueError("negative phase time")

    @property
    def total_s(self) -> float:
        return self.init_s + self.compute_s + self.final_s

    @property
    def compute_rate(self) -> float:
        """Wall-clock seconds per simulated unit, compute phase only."""
        return self.compute_s / self.simulated_units

    @property
    def throughput(self) -> float:
        """Simulated units per day of computation, compute phase only."""
        return self.simulated_units / (self.compute_s / SECONDS_PER_DAY)


@dataclass(frozen=True)
class BreakdownRecord:
    n_cores: int
    cpu_pct: float
    mpi_pct: float
    io_pct: float

    def __post_init__(self):
        if self.n_cores < 1:
            raise ValueError("non-positive core count")
        for name in BREAKDOWN_FIELDS[1:]:
            v = getattr(self, name)
            if not 0.0 <= v <= 100.0:
                raise ValueError(f"{name}={v} outside [0, 100]")
        total = self.cpu_pct + self.mpi_pct + self.io_pct
        if not 99.0 <= total <= 101.0:
            raise ValueError(f"percentages sum to {total:g}, outside [99, 101]")


def from_stages(
    n_cores: int,
    replicate: int,
    stage_seconds: Sequence[float],
    compute_stage: int,
    simulated_units: float,
) -> RunRecord:
    """Collapse a multi-stage log into a run record.

    The computation-bound stage (0-based index ``compute_stage``) becomes
    ``compute_s``; every other stage is summed into ``init_s``.
    """
    if not 0 <= compute_stage < len(stage_seconds):
        raise InputError(f"compute stage {compute_stage} out of range for {len(stage_seconds)} stages")
    others = [s for i, s in enumerate(stage_seconds) if i != compute_stage]
    return RunRecord(
        n_cores=n_cores,
        replicate=replicate,
        init_s=math.fsum(others),
        compute_s=float(stage_seconds[compute_stage]),
        final_s=0.0,
        simulated_units=simulated_units,
    )


# -- parsing ---------------------------------------------------------------


def _read_text(source: Source) -> str:
    data = source if isinstance(source, (bytes, bytearray)) else source.read()
    try:
        return bytes(data).decode("utf-8-sig")
    except UnicodeDecodeError as exc:
        raise InputError(f"input is not valid UTF-8: {exc}") from None


def _to_int(raw: object, name: str, line: int) -> int:
    if isinstance(raw, bool):
        raise InputError(f"{name} must be an integer, got {raw!r}", line)
    if isinstance(raw, int):
        return raw
    if isinstance(raw, float) and raw.is_integer():
        return int(raw)
    if isinstance(raw, str):
        try:
            return int(raw.strip())
        except ValueError:
            pass
    raise InputError(f"{name} must be an integer, got {raw!r}", line)


def _to_float(raw: object, name: str, line: int) -> float:
    if isinstance(raw, bool) or raw is None:
        raise InputError(f"{name} must be a number, got {raw!r}", line)
    try:
        value = float(raw.strip() if isinstance(raw, str) else raw)
    except (TypeError, ValueError):
        raise InputError(f"{name} must be a number, got {raw!r}", line) from None
    if not math.isfinite(value):
        raise InputError(f"{name} must be finite, got {raw!r}", line)
    return value


def _csv_rows(text: str, fields: Sequence[str]) -> Iterable[tuple[int, dict[str, str]]]:
    reader = csv.reader(io.StringIO(text, newline=""))
    try:
        header = next(reader)
    except StopIteration:
        raise InputError("empty input: missing header") from None
    header = [h.strip() for h in header]
    missing = [f for f in fields if f not in header]
    if missing:
        raise InputError(f"missing required column(s): {', '.join(missing)}", 1)
    index = {f: header.index(f) for f in fields}
    for row in reader:
        line = reader.line_num
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(header):
            raise InputError(f"malformed row: expected {len(header)} fields, got {len(row)}", line)
        yield line, {f: row[i] for f, i in index.items()}


def _build_run(values: dict[str, object], line: int) -> RunRecord:
    n = _to_int(values["n_cores"], "n_cores", line)
    if n < 1:
        raise InputError("non-positive core count", line)
    rep = _to_int(values["replicate"], "replicate", line)
    nums = {k: _to_float(values[k], k, line) for k in RUN_FIELDS[2:]}
    try:
        return RunRecord(n_cores=n, replicate=rep, **nums)
    except ValueError as exc:
        raise InputError(str(exc), line) from None


def parse_runs(source: Source, format: RunFormat = "runs-csv") -> list[RunRecord]:
    """Parse a runs-csv or runs-json stream into records, preserving input order.

    Replicates sharing a core count are kept as separate records.
    """
    text = _read_text(source)
    if format == "runs-csv":
        return [_build_run(row, line) for line, row in _csv_rows(text, RUN_FIELDS)]
    if format == "runs-json":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"malformed JSON: {exc.msg}", exc.lineno) from None
        if not isinstance(doc, list):
            raise InputError("runs-json must be an array of objects")
        records = []
        for i, obj in enumerate(doc, start=1):
            if not isinstance(obj, dict):
                raise InputError(f"record {i} is not an object")
            missing = [f for f in RUN_FIELDS if f not in obj]
            if missing:
                raise InputError(f"record {i}: missing required key(s): {', '.join(missing)}")
            records.append(_build_run(obj, i))
        return records
    raise InputError(f"unknown run format {format!r}")


def parse_breakdown(source: Source) -> list[BreakdownRecord]:
    text = _read_text(source)
    out = []
    for line, row in _csv_rows(text, BREAKDOWN_FIELDS):
        n = _to_int(row["n_cores"], "n_cores", line)
        pcts = [_to_float(row[k], k, line) for k in BREAKDOWN_FIELDS[1:]]
        try:
            out.append(BreakdownRecord(n, *pcts))
        except ValueError as exc:
            raise InputError(str(exc), line) from None
    return out


def parse_series(source: Source, label: str = "series", unit: str = "") -> MetricSeries:
    """Read a pre-aggregated series-csv file."""
    text = _read_text(source)
    points = []
    for line, row in _csv_rows(text, SERIES_FIELDS):
        n = _to_int(row["n_cores"], "n_cores", line)
        if n < 1:
            raise InputError("non-positive core count", line)
        mean = _to_float(row["mean"], "mean", line)
        sd = _to_float(row["stddev"], "stddev", line)
        count = _to_int(row["count"], "count", line)
        if points and n <= points[-1].n_cores:
            raise InputError("n_cores must be strictly increasing", line)
        if count < 0 or sd < 0 or (count <= 1 and sd != 0):
            raise InputError(f"inconsistent stddev {sd} for count {count}", line)
        points.append(SeriesPoint(n, mean, sd, count))
    return MetricSeries(label, unit, tuple(points))


# -- serialization ---------------------------------------------------------


def format_number(x: float) -> str:
    """Shortest text that parses back to the same float; integral values drop the '.0'."""
    x = float(x)
    if x.is_integer() and abs(x) < 1e16:
        return str(int(x))
    return repr(x)


def write_runs_csv(records: Iterable[RunRecord]) -> bytes:
    buf = io.StringIO(newline="")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(RUN_FIELDS)
    for r in records:
        w.writerow(
            [r.n_cores, r.replicate]
            + [format_number(getattr(r, f)) for f in RUN_FIELDS[2:]]
        )
    return buf.getvalue().encode("utf-8")


def write_series_csv(series: MetricSeries) -> bytes:
    buf = io.StringIO(newline="")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SERIES_FIELDS)
    for p in series.points:
        w.writerow([p.n_cores, format_number(p.mean), format_number(p.stddev), p.count])
    return buf.getvalue().encode("utf-8")


# -- aggregation -----------------------------------------------------------


def aggregate(
    records: Sequence[RunRecord],
    value: MetricName,
    unit_labels: Sequence[str] | None = None,
    label: str | None = None,
) -> MetricSeries:
    """Group per-replicate values by core count into mean/stddev/count.

    ``unit_labels``, when given, holds one simulated-unit label per record;
    aggregating records with different labels is refused. The result does not
    depend on record order.
    """
    if not records:
        raise InputError("no records to aggregate")
    if value not in METRIC_UNITS:
        raise InputError(f"unknown metric {value!r}")
    if unit_labels is not None:
        if len(unit_labels) != len(records):
            raise InputError("unit_labels must have one entry per record")
        kinds = sorted(set(unit_labels))
        if len(kinds) > 1:
            raise InputError(f"mixed simulated-unit labels: {', '.join(kinds)}")

    groups: dict[int, list[float]] = defaultdict(list)
    for r in records:
        groups[r.n_cores].append(getattr(r, value))

    points = []
    for n in sorted(groups):
        vals = sorted(groups[n])
        sd = statistics.stdev(vals) if len(vals) > 1 else 0.0
        points.append(SeriesPoint(n, statistics.fmean(vals), sd, len(vals)))
    return MetricSeries(label or value, METRIC_UNITS[value], tuple(points))


def augment_linear(series: AnySeries, n_min: int, n_max: int) -> AnySeries:
    """Fill every integer core count in ``[n_min, n_max]`` by linear interpolation.

    Observed points (inside or outside the range) are kept unchanged;
    synthesized points get ``count=0``. Extrapolation is refused.
    """
    ns = series.n_cores
    vals = series.values
    if len(ns) < 2:
        raise InputError("augmentation needs at least 2 points")
    if n_min > n_max:
        raise InputError(f"empty augmentation range [{n_min}, {n_max}]")
    if n_min < ns[0] or n_max > ns[-1]:
        raise InputError(
            f"augmentation range [{n_min}, {n_max}] outside observed span [{ns[0]}, {ns[-1]}]"
        )
    grid = np.arange(n_min, n_max + 1)
    interp = np.interp(grid, ns, vals)
    observed = {int(n): i for i, n in enumerate(ns)}
    new_ns = sorted(set(observed) | set(int(n) for n in grid))
    filled = {int(n): float(v) for n, v in zip(grid, interp)}

    if isinstance(series, MetricSeries):
        pts = []
        for n in new_ns:
            if n in observed:
                pts.append(series.points[observed[n]])
            else:
                pts.append(SeriesPoint(n, filled[n], 0.0, 0))
        return MetricSeries(series.label, series.unit, tuple(pts))

    counts = series.count_array()
    pts, cnts = [], []
    for n in new_ns:
        if n in observed:
            i = observed[n]
            pts.append(series.points[i])
            cnts.append(int(counts[i]))
        else:
            pts.append((n, filled[n]))
            cnts.append(0)
    return NormalizedSeries(series.base_n, tuple(pts), tuple(cnts), series.label)
