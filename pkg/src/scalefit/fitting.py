"""Parameter estimation for the power-law and super-serial capacity models."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from scalefit.errors import FitError, InputError
from scalefit.models import superserial_capacity, superserial_nc, superserial_nc_int
from scalefit.series import AnySeries, NormalizedSeries, series_counts

Weighting = Literal["none", "count"]

DEFAULT_BOUNDS = (1e-5, 0.5)
MAX_ITER = 200
STEP_TOL = 1e-10
GRID_SIZE = 12
N_STARTS = 4


@dataclass(frozen=True)
class PowerLawFit:
    a: float
    b: float
    r_squared: float
    residuals: tuple[tuple[int, float], ...]  # (n_cores, ln observed - ln fitted)
    fit_range: tuple[int, int]
    weighting: str = "none"

    def predict(self, n):
        out = self.b * np.asarray(n, dtype=float) ** self.a
        return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class SuperSerialFit:
    sigma: float
    gamma: float
    sigma_ci: float  # 1-standard-error half-width
    gamma_ci: float
    n_c: float
    n_c_int: int
    sum_sq_residual: float
    bounds: tuple[tuple[float, float], tuple[float, float]]
    n_points: int
    iterations: int
    pinned: tuple[str, ...] = ()

    @property
    def degenerate(self) -> bool:
        return bool(self.pinned)

    def predict(self, n):
        out = superserial_capacity(n, self.sigma, self.gamma)
        return float(out) if out.ndim == 0 else out


def _select(series: AnySeries, fit_range, weighting: Weighting):
    ns = series.n_cores
    vals = series.values
    if weighting == "none":
        w = np.ones(len(ns))
    elif weighting == "count":
        w = series_counts(series).astype(float)
    else:
        raise InputError(f"unknown weighting {weighting!r}")
    if fit_range is None:
        if len(ns) == 0:
            raise FitError("fewer than 2 distinct-N points")
        lo, hi = int(ns[0]), int(ns[-1])
    else:
        lo, hi = (int(v) for v in fit_range)
        if lo > hi:
            raise InputError(f"empty fit range {lo}:{hi}")
    mask = (ns >= lo) & (ns <= hi)
    return ns[mask], vals[mask], w[mask], (lo, hi)


def fit_powerlaw(
    series: AnySeries,
    fit_range: tuple[int, int] | None = None,
    weighting: Weighting = "none",
) -> PowerLawFit:
    """Least-squares line through (ln N, ln value); slope is ``a``, intercept ``ln b``.

    Points outside ``fit_range`` (inclusive) are ignored. With
    ``weighting="count"`` each point is weighted by its replicate count, so
    synthesized points (count 0) drop out.
    """
    ns, vals, w, rng = _select(series, fit_range, weighting)
    if np.count_nonzero(w > 0) < 2:
        raise FitError("fewer than 2 distinct-N points")
    if np.any(vals <= 0):
        bad = int(ns[np.argmax(vals <= 0)])
        raise InputError(f"non-positive value at N={bad}: logarithm undefined")

    x = np.log(ns.astype(float))
    y = np.log(vals)
    sw = math.fsum(w)
    xm = math.fsum(w * x) / sw
    ym = math.fsum(w * y) / sw
    dx, dy = x - xm, y - ym
    sxx = math.fsum(w * dx * dx)
    a = math.fsum(w * dx * dy) / sxx
    ln_b = ym - a * xm
    res = y - (ln_b + a * x)
    ss_res = math.fsum(w * res * res)
    ss_tot = math.fsum(w * dy * dy)
    r2 = 1.0 if ss_tot == 0 else min(1.0, max(0.0, 1.0 - ss_res / ss_tot))
    return PowerLawFit(
        a=a,
        b=math.exp(ln_b),
        r_squared=r2,
        residuals=tuple((int(n), float(r)) for n, r in zip(ns, res)),
        fit_range=rng,
        weighting=weighting,
    )


# -- super-serial ----------------------------------------------------------


def _normalize_bounds(bounds):
    if bounds is None:
        bounds = DEFAULT_BOUNDS
    if np.ndim(bounds) == 1:
        bounds = (tuple(bounds), tuple(bounds))
    (slo, shi), (glo, ghi) = bounds
    for lo, hi in ((slo, shi), (glo, ghi)):
        if not 0 < lo < hi <= 1:
            raise InputError(f"bounds ({lo}, {hi}) must satisfy 0 < lo < hi <= 1")
    return (float(slo), float(shi)), (float(glo), float(ghi))


def _jacobian_log(n, sigma, gamma):
    """d C / d ln(sigma) and d C / d ln(gamma)."""
    q = (n - 1.0) + gamma * n * (n - 1.0)
    d = 1.0 + sigma * q
    common = -n / (d * d)
    return np.column_stack((common * q * sigma, common * sigma * n * (n - 1.0) * gamma))


def _ssr(n, y, w, sigma, gamma):
    r = superserial_capacity(n, sigma, gamma) - y
    return math.fsum(w * r * r)


def _refine(n, y, w, x0, lo, hi, max_iter):
    """Box-projected damped Gauss-Newton in log-parameter space."""
    x = x0.copy()
    p = np.exp(x)
    r = superserial_capacity(n, *p) - y
    f = math.fsum(w * r * r)
    lam = 1e-3
    for it in range(1, max_iter + 1):
        J = _jacobian_log(n, *p)
        g = J.T @ (w * r)
        H = J.T @ (w[:, None] * J)
        free = ~(((x <= lo) & (g > 0)) | ((x >= hi) & (g < 0)))
        if not free.any() or f == 0.0:
            return x, f, it
        Hf = H[np.ix_(free, free)]
        diag = np.where(np.diag(Hf) > 0, np.diag(Hf), 1.0)
        while True:
            step = np.zeros(2)
            try:
                step[free] = np.linalg.solve(Hf + lam * np.diag(diag), -g[free])
            except np.linalg.LinAlgError:
                step[free] = 0.0
            x_new = np.clip(x + step, lo, hi)
            p_new = np.exp(x_new)
            r_new = superserial_capacity(n, *p_new) - y
            f_new = math.fsum(w * r_new * r_new)
            if f_new <= f:
                lam = max(lam / 10.0, 1e-12)
                break
            lam *= 10.0
            if lam > 1e16:
                # no descent possible from here: stationary to working precision
                return x, f, it
        rel = np.abs(p_new - p) / p
        x, p, r, f = x_new, p_new, r_new, f_new
        if np.all(rel < STEP_TOL):
            return x, f, it
    raise FitError(f"super-serial fit did not converge in {max_iter} iterations")


def fit_superserial(
    series: NormalizedSeries,
    bounds=DEFAULT_BOUNDS,
    weighting: Weighting = "none",
    max_iter: int = MAX_ITER,
) -> SuperSerialFit:
    """Bounded least-squares fit of the super-serial capacity curve.

    Minimizes the sum of squared capacity residuals over the box ``bounds``
    (one ``(lo, hi)`` pair for both parameters, or one pair each for sigma
    and gamma). Starts from the best points of a log-spaced grid and refines
    each; the lowest objective wins, ties going to smaller sigma then gamma.
    Half-widths are one standard error from the linearized covariance
    ``s^2 (J^T J)^-1`` with ``s^2 = SSR / (m - 2)``.
    """
    (slo, shi), (glo, ghi) = _normalize_bounds(bounds)
    ns, vals, w, _ = _select(series, None, weighting)
    m = int(np.count_nonzero(w > 0))
    if m < 3:
        raise FitError("super-serial fit needs at least 3 points")
    if np.any(vals <= 0):
        raise InputError("capacity values must be positive")
    n = ns.astype(float)

    lo = np.log([slo, glo])
    hi = np.log([shi, ghi])
    s_grid = np.exp(np.linspace(lo[0], hi[0], GRID_SIZE))
    g_grid = np.exp(np.linspace(lo[1], hi[1], GRID_SIZE))
    starts = sorted(
        (_ssr(n, vals, w, s, g), s, g) for s in s_grid for g in g_grid
    )[:N_STARTS]

    best = None
    for _, s0, g0 in starts:
        x, f, iters = _refine(n, vals, w, np.log([s0, g0]), lo, hi, max_iter)
        # exp(log(bound)) may land one ulp outside the box
        sigma = min(max(float(np.exp(x[0])), slo), shi)
        gamma = min(max(float(np.exp(x[1])), glo), ghi)
        key = (f, sigma, gamma)
        if best is None or key < best[0]:
            best = (key, x, iters)
    (f, sigma, gamma), x, iters = best

    pinned = tuple(
        name
        for name, xi, l, h in zip(("sigma", "gamma"), x, lo, hi)
        if abs(xi - l) < 1e-12 or abs(xi - h) < 1e-12
    )
    if len(pinned) == 2:
        raise FitError(
            f"degenerate fit: both parameters at bounds (sigma={sigma:g}, gamma={gamma:g})"
        )

    J = _jacobian_log(n, sigma, gamma) / np.array([sigma, gamma])
    JtJ = J.T @ (w[:, None] * J)
    s2 = f / (m - 2)
    cov = s2 * np.linalg.pinv(JtJ)
    sigma_ci, gamma_ci = (float(math.sqrt(max(v, 0.0))) for v in np.diag(cov))

    return SuperSerialFit(
        sigma=sigma,
        gamma=gamma,
        sigma_ci=sigma_ci,
        gamma_ci=gamma_ci,
        n_c=superserial_nc(sigma, gamma),
        n_c_int=superserial_nc_int(sigma, gamma),
        sum_sq_residual=f,
        bounds=((slo, shi), (glo, ghi)),
        n_points=m,
        iterations=iters,
        pinned=pinned,
    )
