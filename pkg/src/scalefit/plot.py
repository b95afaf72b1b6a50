"""Log-log scaling plots as plain SVG plus the matching plot-data CSV."""

from __future__ import annotations

import csv
import io
import math
from collections.abc import Sequence
from dataclasses import dataclass

from scalefit.errors import FitError
from scalefit.fitting import PowerLawFit
from scalefit.ingest import format_number

WIDTH, HEIGHT = 640, 480
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 72, 24, 40, 56
PAD = 0.05  # fraction of the log span added on each side

COLORS = ("#1f5fa8", "#c0392b", "#2e8b57", "#8e44ad")
MARKERS = ("circle", "square", "triangle", "diamond")


@dataclass(frozen=True)
class Layer:
    label: str
    n_cores: tuple[int, ...]
    observed: tuple[float, ...]
    fit: PowerLawFit | None = None
    saturation_n: int | None = None


def plot_rows(layer: Layer) -> list[tuple[int, float, float | None, float | None]]:
    rows = []
    for n, obs in zip(layer.n_cores, layer.observed):
        if layer.fit is None:
            rows.append((n, obs, None, None))
        else:
            fitted = layer.fit.predict(float(n))
            rows.append((n, obs, fitted, 100.0 * (obs - fitted) / fitted))
    return rows


def plot_csv(layer: Layer) -> bytes:
    buf = io.StringIO(newline="")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n_cores", "observed", "fitted", "deviation_pct"])
    for n, obs, fitted, dev in plot_rows(layer):
        w.writerow([
            n,
            format_number(obs),
            "" if fitted is None else f"{fitted:.9g}",
            "" if dev is None else f"{dev:.6g}",
        ])
    return buf.getvalue().encode("utf-8")


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def _ticks(lo: float, hi: float, base: int) -> list[float]:
    """Powers of ``base`` inside [10**lo, 10**hi]; falls back to 1-2-5 steps when too sparse."""
    k0 = math.floor(lo / math.log10(base))
    k1 = math.ceil(hi / math.log10(base))
    ticks = [float(base) ** k for k in range(k0, k1 + 1)]
    ticks = [t for t in ticks if lo <= math.log10(t) <= hi]
    if len(ticks) < 2:
        ticks = [
            m * 10.0**k
            for k in range(math.floor(lo) - 1, math.ceil(hi) + 1)
            for m in (1, 2, 5)
            if lo <= math.log10(m * 10.0**k) <= hi
        ]
    if len(ticks) > 12:
        ticks = ticks[:: math.ceil(len(ticks) / 12)]
    return ticks


def _marker(kind: str, x: float, y: float, color: str) -> str:
    r = 4.0
    style = f'fill="none" stroke="{color}" stroke-width="1.5"'
    if kind == "circle":
        return f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="{_fmt(r)}" {style}/>'
    if kind == "square":
        return f'<rect x="{_fmt(x - r)}" y="{_fmt(y - r)}" width="{_fmt(2 * r)}" height="{_fmt(2 * r)}" {style}/>'
    if kind == "triangle":
        pts = [(x, y - r), (x + r, y + r), (x - r, y + r)]
    else:
        pts = [(x, y - r), (x + r, y), (x, y + r), (x - r, y)]
    return f'<polygon points="{" ".join(f"{_fmt(a)},{_fmt(b)}" for a, b in pts)}" {style}/>'


def render_svg(layers: Sequence[Layer], title: str = "", y_label: str = "capacity") -> str:
    """Observed points, power-fit line (short dash) and linear reference (long dash) on log-log axes."""
    if not layers:
        raise FitError("nothing to plot")
    for layer in layers:
        if len(set(layer.n_cores)) < 2 or layer.fit is None:
            raise FitError(f"insufficient points to plot {layer.label!r}")

    xs, ys = [], []
    for layer in layers:
        lo_n, hi_n = min(layer.n_cores), max(layer.n_cores)
        xs += [lo_n, hi_n]
        ys += list(layer.observed)
        ys += [layer.fit.predict(float(lo_n)), layer.fit.predict(float(hi_n))]
        ref = layer.observed[0] / layer.n_cores[0]
        ys += [ref * lo_n, ref * hi_n]
    lx0, lx1 = math.log10(min(xs)), math.log10(max(xs))
    ly0, ly1 = math.log10(min(ys)), math.log10(max(ys))
    if ly1 == ly0:
        ly0, ly1 = ly0 - 0.5, ly1 + 0.5
    px, py = PAD * (lx1 - lx0), PAD * (ly1 - ly0)
    lx0, lx1, ly0, ly1 = lx0 - px, lx1 + px, ly0 - py, ly1 + py

    plot_w = WIDTH - MARGIN_L - MARGIN_R
    plot_h = HEIGHT - MARGIN_T - MARGIN_B

    def sx(n: float) -> float:
        return MARGIN_L + (math.log10(n) - lx0) / (lx1 - lx0) * plot_w

    def sy(v: float) -> float:
        return MARGIN_T + (ly1 - math.log10(v)) / (ly1 - ly0) * plot_h

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>',
        f'<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{plot_w}" height="{plot_h}" '
        'fill="none" stroke="#000000" stroke-width="1"/>',
    ]
    if title:
        out.append(f'<text x="{WIDTH / 2:.2f}" y="22" text-anchor="middle" font-size="13">{_escape(title)}</text>')

    for t in _ticks(lx0, lx1, 2):
        x = sx(t)
        out.append(f'<line x1="{_fmt(x)}" y1="{MARGIN_T + plot_h}" x2="{_fmt(x)}" y2="{MARGIN_T}" stroke="#dddddd"/>')
        out.append(f'<text x="{_fmt(x)}" y="{MARGIN_T + plot_h + 16}" text-anchor="middle">{t:g}</text>')
    for t in _ticks(ly0, ly1, 10):
        y = sy(t)
        out.append(f'<line x1="{MARGIN_L}" y1="{_fmt(y)}" x2="{MARGIN_L + plot_w}" y2="{_fmt(y)}" stroke="#dddddd"/>')
        out.append(f'<text x="{MARGIN_L - 6}" y="{_fmt(y + 4)}" text-anchor="end">{t:g}</text>')
    out.append(f'<text x="{MARGIN_L + plot_w / 2:.2f}" y="{HEIGHT - 14}" text-anchor="middle">cores (N)</text>')
    out.append(
        f'<text x="16" y="{MARGIN_T + plot_h / 2:.2f}" text-anchor="middle" '
        f'transform="rotate(-90 16 {MARGIN_T + plot_h / 2:.2f})">{_escape(y_label)}</text>'
    )

    legend_y = MARGIN_T + 14
    for i, layer in enumerate(layers):
        color, marker = COLORS[i % len(COLORS)], MARKERS[i % len(MARKERS)]
        lo_n, hi_n = min(layer.n_cores), max(layer.n_cores)
        ref = layer.observed[0] / layer.n_cores[0]
        out.append(
            f'<line x1="{_fmt(sx(lo_n))}" y1="{_fmt(sy(ref * lo_n))}" x2="{_fmt(sx(hi_n))}" '
            f'y2="{_fmt(sy(ref * hi_n))}" stroke="#888888" stroke-width="1" stroke-dasharray="12,6"/>'
        )
        f = layer.fit
        out.append(
            f'<line x1="{_fmt(sx(lo_n))}" y1="{_fmt(sy(f.predict(float(lo_n))))}" x2="{_fmt(sx(hi_n))}" '
            f'y2="{_fmt(sy(f.predict(float(hi_n))))}" stroke="{color}" stroke-width="1.2" stroke-dasharray="4,3"/>'
        )
        path = " ".join(f"{_fmt(sx(n))},{_fmt(sy(v))}" for n, v in zip(layer.n_cores, layer.observed))
        out.append(f'<polyline points="{path}" fill="none" stroke="{color}" stroke-width="1"/>')
        for n, v in zip(layer.n_cores, layer.observed):
            out.append(_marker(marker, sx(n), sy(v), color))
        if layer.saturation_n is not None and layer.saturation_n in layer.n_cores:
            v = layer.observed[layer.n_cores.index(layer.saturation_n)]
            out.append(
                f'<circle cx="{_fmt(sx(layer.saturation_n))}" cy="{_fmt(sy(v))}" r="9" '
                'fill="none" stroke="#000000" stroke-width="1.5"/>'
            )
            out.append(
                f'<text x="{_fmt(sx(layer.saturation_n) - 12)}" y="{_fmt(sy(v) - 12)}" '
                f'text-anchor="end">saturation N={layer.saturation_n}</text>'
            )
        label = f"{layer.label}: {f.b:.3g}*N^{f.a:.3f}"
        out.append(_marker(marker, MARGIN_L + 14, legend_y - 4, color))
        out.append(f'<text x="{MARGIN_L + 26}" y="{legend_y}">{_escape(label)}</text>')
        legend_y += 16
    out.append(
        f'<line x1="{MARGIN_L + 6}" y1="{legend_y - 4}" x2="{MARGIN_L + 22}" y2="{legend_y - 4}" '
        'stroke="#888888" stroke-dasharray="12,6"/>'
    )
    out.append(f'<text x="{MARGIN_L + 26}" y="{legend_y}">linear scaling</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _escape(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
