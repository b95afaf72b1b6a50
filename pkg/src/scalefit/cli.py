"""Command-line interface: ``scalefit ingest | analyze | plot``.

Exit codes: 0 success, 1 input error, 2 fit failure, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from datetime import datetime, timezone
from pathlib import Path

from scalefit import report as rpt
from scalefit.analysis import detect_saturation
from scalefit.errors import FitError, InputError
from scalefit.fitting import PowerLawFit, fit_powerlaw
from scalefit.ingest import (
    METRIC_UNITS,
    RunRecord,
    aggregate,
    parse_breakdown,
    parse_runs,
    parse_series,
    write_series_csv,
)
from scalefit.plot import Layer, plot_csv, render_svg
from scalefit.series import MetricSeries

EXIT_OK, EXIT_INPUT, EXIT_FIT, EXIT_IO = 0, 1, 2, 3


class IOFailure(Exception):
    pass


def _read(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise IOFailure(f"cannot read {path}: {exc.strerror or exc}") from None


def _write(path: Path, data: bytes) -> None:
    try:
        path.write_bytes(data)
    except OSError as exc:
        raise IOFailure(f"cannot write {path}: {exc.strerror or exc}") from None


def _range(text: str) -> tuple[float, float]:
    try:
        lo, hi = text.split(":")
        return float(lo), float(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi, got {text!r}") from None


def _int_range(text: str) -> tuple[int, int]:
    lo, hi = _range(text)
    if not (lo.is_integer() and hi.is_integer()):
        raise argparse.ArgumentTypeError(f"expected integer lo:hi, got {text!r}")
    return int(lo), int(hi)


def _load_records(paths: list[str], fmt: str) -> list[RunRecord]:
    records = []
    for path in paths:
        data = _read(path)
        if not data.strip():
            raise InputError(f"{path}: no records")
        try:
            records += parse_runs(data, fmt)
        except InputError as exc:
            raise InputError(f"{path}: {exc}") from None
    if not records:
        raise InputError("no records")
    return records


def _load_series(paths: list[str], fmt: str, metric: str) -> MetricSeries:
    field = rpt.METRICS[metric]
    if fmt == "series-csv":
        if len(paths) != 1:
            raise InputError("series-csv input takes exactly one file")
        data = _read(paths[0])
        if not data.strip():
            raise InputError(f"{paths[0]}: no records")
        try:
            series = parse_series(data, field, METRIC_UNITS[field])
        except InputError as exc:
            raise InputError(f"{paths[0]}: {exc}") from None
        if len(series) == 0:
            raise InputError(f"{paths[0]}: no records")
        return series
    return aggregate(_load_records(paths, fmt), field)


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        cfg = json.loads(_read(path))
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed config: {exc.msg}", exc.lineno) from None
    if not isinstance(cfg, dict):
        raise InputError(f"{path}: config must be a JSON object")
    unknown = sorted(set(cfg) - set(rpt.DEFAULT_CONFIG) - {"format"})
    if unknown:
        raise InputError(f"{path}: unknown config key(s): {', '.join(unknown)}")
    return cfg


# -- subcommands -----------------------------------------------------------


def cmd_ingest(args: argparse.Namespace) -> int:
    metrics = args.metric or ["throughput"]
    records = _load_records(args.paths, args.format)
    outputs = []
    for metric in metrics:
        series = aggregate(records, rpt.METRICS[metric])
        outputs.append((metric, series))
    # validate everything before writing anything
    out_dir = Path(args.out)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise IOFailure(f"cannot create {out_dir}: {exc.strerror or exc}") from None
    print(f"read {len(records)} records from {len(args.paths)} file(s)")
    for metric, series in outputs:
        path = out_dir / f"{metric}.csv"
        _write(path, write_series_csv(series))
        print(f"wrote {path} ({len(series)} points)")
    return EXIT_OK


def _effective_config(args: argparse.Namespace) -> tuple[dict, str]:
    file_cfg = _load_config(args.config)
    fmt = args.format or file_cfg.pop("format", "runs-csv")
    file_cfg.pop("format", None)
    cli = {
        "metric": args.metric,
        "base_n": args.base_n,
        "fit_range": list(args.fit_range) if args.fit_range else None,
        "saturation_threshold": args.saturation_threshold,
        "superserial": args.superserial,
        "bounds": list(args.bounds) if args.bounds else None,
        "augment_range": list(args.augment) if args.augment else None,
        "efficiency_floor": args.efficiency_floor,
        "weighting": args.weighting,
        "max_iter": args.max_iter,
    }
    cfg = {**rpt.DEFAULT_CONFIG, **file_cfg, **{k: v for k, v in cli.items() if v is not None}}
    return cfg, fmt


def cmd_analyze(args: argparse.Namespace) -> int:
    cfg, fmt = _effective_config(args)
    if cfg["metric"] not in rpt.METRICS:
        raise InputError(f"unknown metric {cfg['metric']!r}")
    series = _load_series(args.paths, fmt, cfg["metric"])
    breakdown = None
    if args.breakdown:
        breakdown = parse_breakdown(_read(args.breakdown))
    report = rpt.analyze(series, cfg, breakdown)
    report.inputs = {"paths": list(args.paths), "format": fmt, "breakdown": args.breakdown}
    if args.deterministic:
        report.generated_at = rpt.PINNED_TIMESTAMP
    else:
        report.generated_at = datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")
    if args.out:
        _write(Path(args.out), rpt.to_json(report).encode("utf-8"))
    sys.stdout.write(rpt.summary_text(report))
    return EXIT_OK


def _layer_from_path(path: str, fit_range, threshold: float) -> Layer:
    data = _read(path)
    if path.endswith(".json") or data.lstrip().startswith(b"{"):
        doc = json.loads(data)
        if doc.get("schema_version") != rpt.SCHEMA_VERSION:
            raise InputError(f"{path}: unsupported report schema")
        pts = doc["capacity"]["points"]
        ns = tuple(p["n_cores"] for p in pts)
        obs = tuple(p["value"] for p in pts)
        pf = doc["power_fit"]
        fit = PowerLawFit(pf["a"], pf["b"], pf["r_squared"], (), tuple(pf["fit_range"]), pf["weighting"])
        return Layer(Path(path).stem, ns, obs, fit, doc["saturation"]["saturation_n"])

    series = parse_series(data, Path(path).stem)
    ns = tuple(int(n) for n in series.n_cores)
    obs = tuple(float(v) for v in series.values)
    try:
        fit = fit_powerlaw(series, fit_range)
    except FitError:
        return Layer(Path(path).stem, ns, obs, None)
    sat = detect_saturation(series, fit, threshold).saturation_n
    return Layer(Path(path).stem, ns, obs, fit, sat)


def cmd_plot(args: argparse.Namespace) -> int:
    layers = [_layer_from_path(p, args.fit_range, args.saturation_threshold) for p in args.paths]
    out = Path(args.out)
    stem = out.with_suffix("")
    for i, layer in enumerate(layers, start=1):
        csv_path = Path(f"{stem}.csv") if len(layers) == 1 else Path(f"{stem}.{i}.csv")
        _write(csv_path, plot_csv(layer))
        print(f"wrote {csv_path}")
    svg = render_svg(layers, args.title or "", args.y_label)
    _write(out, svg.encode("utf-8"))
    print(f"wrote {out}")
    return EXIT_OK


# -- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="scalefit", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    metric_choices = sorted(rpt.METRICS)

    ing = sub.add_parser("ingest", help="validate run files and write per-metric series-csv")
    ing.add_argument("paths", nargs="+")
    ing.add_argument("--format", choices=["runs-csv", "runs-json"], default="runs-csv")
    ing.add_argument("--metric", choices=metric_choices, action="append",
                     help="metric to aggregate (repeatable; default throughput)")
    ing.add_argument("--out", required=True, help="output directory")
    ing.set_defaults(func=cmd_ingest)

    an = sub.add_parser("analyze", help="fit models and recommend a core count")
    an.add_argument("paths", nargs="+")
    an.add_argument("--format", choices=["runs-csv", "runs-json", "series-csv"])
    an.add_argument("--metric", choices=metric_choices)
    an.add_argument("--config", help="JSON config file; flags override it")
    an.add_argument("--base-n", type=int)
    an.add_argument("--fit-range", type=_int_range, metavar="LO:HI")
    an.add_argument("--saturation-threshold", type=float)
    an.add_argument("--superserial", action="store_true", default=None, help="also fit the super-serial model")
    an.add_argument("--bounds", type=_range, metavar="LO:HI", help="super-serial parameter box")
    an.add_argument("--augment", type=_int_range, metavar="LO:HI",
                    help="interpolate capacity at every integer N in LO:HI before the super-serial fit")
    an.add_argument("--efficiency-floor", type=float)
    an.add_argument("--weighting", choices=["none", "count"])
    an.add_argument("--max-iter", type=int)
    an.add_argument("--breakdown", help="breakdown-csv with cpu/mpi/io percentages")
    an.add_argument("--out", help="structured report path (JSON)")
    an.add_argument("--deterministic", action="store_true", help="pin the report timestamp")
    an.set_defaults(func=cmd_analyze)

    pl = sub.add_parser("plot", help="log-log plot of series or reports (SVG + plot-data CSV)")
    pl.add_argument("paths", nargs="+", help="report JSON or series-csv files; repeat to overlay")
    pl.add_argument("--out", required=True, help="SVG path; data CSV is written next to it")
    pl.add_argument("--fit-range", type=_int_range, metavar="LO:HI")
    pl.add_argument("--saturation-threshold", type=float, default=0.10)
    pl.add_argument("--title")
    pl.add_argument("--y-label", default="capacity")
    pl.set_defaults(func=cmd_plot)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except IOFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except FitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FIT
    except (InputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
