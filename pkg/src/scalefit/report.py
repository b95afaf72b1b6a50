"""End-to-end analysis pipeline and its structured/text report."""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from typing import Any

from scalefit import __version__
from scalefit.analysis import (
    BoundClass,
    EfficiencyRow,
    Recommendation,
    SaturationResult,
    classify_bound,
    detect_saturation,
    efficiency_table,
    recommend,
)
from scalefit.errors import FitError, InputError
from scalefit.fitting import PowerLawFit, SuperSerialFit, fit_powerlaw, fit_superserial
from scalefit.ingest import BreakdownRecord, augment_linear, write_series_csv
from scalefit.metrics import model_cost, scaleup, speedup_series
from scalefit.series import MetricSeries, NormalizedSeries

SCHEMA_VERSION = 1
PINNED_TIMESTAMP = "1970-01-01T00:00:00Z"

# CLI metric name -> aggregation field
METRICS = {
    "throughput": "throughput",
    "compute-rate": "compute_rate",
    "init": "init_s",
    "total": "total_s",
}
TIME_LIKE = {"compute-rate", "init", "total"}

DEFAULT_CONFIG: dict[str, Any] = {
    "metric": "throughput",
    "base_n": None,
    "fit_range": None,
    "saturation_threshold": 0.10,
    "superserial": False,
    "bounds": [1e-5, 0.5],
    "augment_range": None,
    "efficiency_floor": None,
    "weighting": "none",
    "max_iter": 200,
}


@dataclass
class AnalysisReport:
    input_digest: str
    config: dict[str, Any]
    series: MetricSeries
    capacity: NormalizedSeries
    power_fit: PowerLawFit
    metric_power_fit: PowerLawFit
    saturation: SaturationResult
    recommendation: Recommendation
    efficiency_table: list[EfficiencyRow]
    superserial_fit: SuperSerialFit | None = None
    superserial_omitted: str | None = None
    cost_curve: list[tuple[int, float]] | None = None
    bound_classes: list[BoundClass] | None = None
    inputs: dict[str, Any] = field(default_factory=dict)
    generated_at: str = PINNED_TIMESTAMP


def series_digest(series: MetricSeries) -> str:
    return "sha256:" + hashlib.sha256(write_series_csv(series)).hexdigest()


def analyze(
    series: MetricSeries,
    config: dict[str, Any],
    breakdown: list[BreakdownRecord] | None = None,
) -> AnalysisReport:
    """Run normalization, fits, saturation and recommendation on one metric series.

    ``config`` is merged over DEFAULT_CONFIG; the merged dict is what the
    report echoes. A missing ``base_n`` resolves to the smallest tested N.
    """
    cfg = {**DEFAULT_CONFIG, **config}
    if len(series) == 0:
        raise InputError("no records")
    if cfg["base_n"] is None:
        cfg["base_n"] = int(series.points[0].n_cores)
    metric = cfg["metric"]
    if metric not in METRICS:
        raise InputError(f"unknown metric {metric!r}")
    base_n = int(cfg["base_n"])

    if metric in TIME_LIKE:
        capacity = speedup_series(series, base_n)
    else:
        capacity = scaleup(series, base_n)

    fit_range = tuple(cfg["fit_range"]) if cfg["fit_range"] is not None else None
    power_fit = fit_powerlaw(capacity, fit_range, cfg["weighting"])
    metric_fit = fit_powerlaw(series, fit_range, cfg["weighting"])
    saturation = detect_saturation(capacity, power_fit, cfg["saturation_threshold"])

    ss_fit, ss_omitted = None, None
    if not cfg["superserial"]:
        ss_omitted = "not requested"
    elif base_n != 1:
        ss_omitted = f"needs a serial base point (base_n=1); series normalized at N={base_n}"
    else:
        target = capacity
        if cfg["augment_range"] is not None:
            lo, hi = cfg["augment_range"]
            target = augment_linear(capacity, int(lo), int(hi))
        try:
            ss_fit = fit_superserial(target, cfg["bounds"], cfg["weighting"], int(cfg["max_iter"]))
        except FitError as exc:
            ss_omitted = str(exc)

    fits: list = [power_fit] + ([ss_fit] if ss_fit is not None else [])
    rec = recommend(fits, saturation, cfg["efficiency_floor"], capacity)

    cost = None
    if metric == "throughput":
        cost = [(p.n_cores, model_cost(p.n_cores, p.mean)) for p in series.points]

    bounds = [classify_bound(r) for r in breakdown] if breakdown else None

    return AnalysisReport(
        input_digest=series_digest(series),
        config=cfg,
        series=series,
        capacity=capacity,
        power_fit=power_fit,
        metric_power_fit=metric_fit,
        saturation=saturation,
        recommendation=rec,
        efficiency_table=efficiency_table(capacity),
        superserial_fit=ss_fit,
        superserial_omitted=ss_omitted,
        cost_curve=cost,
        bound_classes=bounds,
    )


# -- serialization ---------------------------------------------------------


def num(x: float | None) -> float | None:
    """Round to 9 significant digits."""
    if x is None:
        return None
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"non-finite value {x} in report")
    return float(f"{x:.9g}")


def _power_dict(fit: PowerLawFit) -> dict[str, Any]:
    return {
        "a": num(fit.a),
        "b": num(fit.b),
        "r_squared": num(fit.r_squared),
        "fit_range": list(fit.fit_range),
        "weighting": fit.weighting,
        "residuals": [{"n_cores": n, "log_residual": num(r)} for n, r in fit.residuals],
    }


def _config_dict(cfg: dict[str, Any]) -> dict[str, Any]:
    out = {}
    for k in DEFAULT_CONFIG:
        v = cfg[k]
        if isinstance(v, float):
            v = num(v)
        elif isinstance(v, (list, tuple)):
            v = [num(x) if isinstance(x, float) else x for x in v]
        out[k] = v
    return out


def to_dict(report: AnalysisReport) -> dict[str, Any]:
    ss: dict[str, Any]
    if report.superserial_fit is None:
        ss = {"omitted": report.superserial_omitted}
    else:
        f = report.superserial_fit
        ss = {
            "sigma": num(f.sigma),
            "sigma_ci": num(f.sigma_ci),
            "gamma": num(f.gamma),
            "gamma_ci": num(f.gamma_ci),
            "n_c": num(f.n_c),
            "n_c_int": f.n_c_int,
            "sum_sq_residual": num(f.sum_sq_residual),
            "n_points": f.n_points,
            "iterations": f.iterations,
            "degenerate": f.degenerate,
            "pinned": list(f.pinned),
        }
    rec = report.recommendation
    return {
        "schema_version": SCHEMA_VERSION,
        "tool": f"scalefit {__version__}",
        "generated_at": report.generated_at,
        "inputs": report.inputs,
        "input_digest": report.input_digest,
        "config": _config_dict(report.config),
        "series": {
            "label": report.series.label,
            "unit": report.series.unit,
            "points": [
                {"n_cores": p.n_cores, "mean": num(p.mean), "stddev": num(p.stddev), "count": p.count}
                for p in report.series.points
            ],
        },
        "capacity": {
            "kind": report.capacity.label,
            "base_n": report.capacity.base_n,
            "points": [{"n_cores": n, "value": num(v)} for n, v in report.capacity.points],
        },
        "power_fit": _power_dict(report.power_fit),
        "metric_power_fit": _power_dict(report.metric_power_fit),
        "superserial_fit": ss,
        "saturation": {
            "saturation_n": report.saturation.saturation_n,
            "threshold": num(report.saturation.threshold),
            "relative_deviation_at": [
                {"n_cores": n, "deviation": num(d)} for n, d in report.saturation.relative_deviation_at
            ],
        },
        "recommendation": {
            "optimal_n": rec.optimal_n,
            "rationale": rec.rationale,
            "supporting": list(rec.supporting),
            "warnings": list(rec.warnings),
            "saturation_policy": "last tested N below the saturation point",
        },
        "efficiency_table": [
            {"n_cores": r.n_cores, "efficiency": num(r.efficiency), "scalability_ratio": num(r.scalability_ratio)}
            for r in report.efficiency_table
        ],
        "cost_curve": (
            {"omitted": "cost needs a throughput metric"}
            if report.cost_curve is None
            else [{"n_cores": n, "proc_hours_per_unit": num(c)} for n, c in report.cost_curve]
        ),
        "bound_classes": (
            {"omitted": "no breakdown supplied"}
            if report.bound_classes is None
            else [{"n_cores": b.n_cores, "class": b.bound} for b in report.bound_classes]
        ),
    }


def to_json(report: AnalysisReport) -> str:
    return json.dumps(to_dict(report), indent=2) + "\n"


def summary_text(report: AnalysisReport) -> str:
    cfg = report.config
    pf = report.power_fit
    lines = [
        f"series: {report.series.label} [{report.series.unit}], {len(report.series)} core counts "
        f"({report.series.points[0].n_cores}..{report.series.points[-1].n_cores})",
        f"normalization: {report.capacity.label} relative to N={report.capacity.base_n}",
        f"power fit ({report.capacity.label}): C(N) = {pf.b:.4g} * N^{pf.a:.4f}  "
        f"r^2={pf.r_squared:.4f}  range {pf.fit_range[0]}..{pf.fit_range[1]}",
        f"power fit ({report.series.label}): Y(N) = {report.metric_power_fit.b:.4g} * "
        f"N^{report.metric_power_fit.a:.4f}",
    ]
    sat = report.saturation
    if sat.saturation_n is None:
        lines.append(f"saturation: none at threshold {sat.threshold:g}")
    else:
        lines.append(f"saturation: N={sat.saturation_n} (threshold {sat.threshold:g})")
    if report.superserial_fit is not None:
        f = report.superserial_fit
        flag = "  [degenerate: " + ", ".join(f.pinned) + " at bound]" if f.degenerate else ""
        lines.append(
            f"super-serial: sigma={f.sigma:.3e} +/- {f.sigma_ci:.2e}, "
            f"gamma={f.gamma:.3e} +/- {f.gamma_ci:.2e}, N_c={f.n_c:.1f} ({f.n_c_int}){flag}"
        )
    else:
        lines.append(f"super-serial: omitted ({report.superserial_omitted})")
    lines.append("efficiency table:")
    lines.append("  N        E(N)      SC")
    for r in report.efficiency_table:
        sc = "-" if r.scalability_ratio is None else f"{r.scalability_ratio:.4f}"
        lines.append(f"  {r.n_cores:<8d} {r.efficiency:<9.4f} {sc}")
    if report.bound_classes:
        lines.append("bound classes: " + ", ".join(f"{b.n_cores}:{b.bound}" for b in report.bound_classes))
    rec = report.recommendation
    lines.append(f"recommended cores: {rec.optimal_n} ({rec.rationale})")
    for w in rec.warnings:
        lines.append(f"warning: {w}")
    if cfg["metric"] == "throughput" and report.cost_curve:
        n, c = report.cost_curve[-1]
        lines.append(f"model cost at N={n}: {c:.4g} processor-hours per simulated unit")
    return "\n".join(lines) + "\n"
