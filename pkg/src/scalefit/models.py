"""Closed-form scalability models.

All capacity models except the power law equal 1 at N=1:

    linear       C = N
    amdahl       C = N / (1 + s (N-1))
    gustafson    C = N^2 / (N + s1 (N-1))
    superserial  C = N / (1 + s [(N-1) + g N (N-1)])
    powerlaw     C = b N^a

The Gustafson entry is kept in the N^2 form above. The more familiar
scaled-speedup form ``N - s1 (N-1)`` is a different curve and is not
implemented here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from scalefit.errors import InputError

ModelKind = Literal["linear", "amdahl", "gustafson", "superserial", "powerlaw"]

_REQUIRED = {
    "linear": (),
    "amdahl": ("sigma",),
    "gustafson": ("sigma_prime",),
    "superserial": ("sigma", "gamma"),
    "powerlaw": ("a", "b"),
}


@dataclass(frozen=True)
class ModelParams:
    kind: ModelKind
    sigma: float | None = None
    sigma_prime: float | None = None
    gamma: float | None = None
    a: float | None = None
    b: float | None = None

    def __post_init__(self):
        if self.kind not in _REQUIRED:
            raise InputError(f"unknown model kind {self.kind!r}")
        for name in _REQUIRED[self.kind]:
            v = getattr(self, name)
            if v is None:
                raise InputError(f"{self.kind} model requires {name}")
            if not math.isfinite(v):
                raise InputError(f"{name} must be finite")
        for name in ("sigma", "sigma_prime", "gamma"):
            v = getattr(self, name)
            if name in _REQUIRED[self.kind] and not 0.0 <= v <= 1.0:
                raise InputError(f"{name}={v} outside [0, 1]")
        if self.kind == "powerlaw" and not self.b > 0:
            raise InputError(f"b must be positive, got {self.b}")


def eval_capacity(params: ModelParams, n):
    """Scaling capacity at ``n`` cores (scalar or array)."""
    arr = np.asarray(n, dtype=float)
    if np.any(arr < 1):
        raise InputError("core count must be >= 1")
    kind = params.kind
    if kind == "linear":
        out = arr * 1.0
    elif kind == "amdahl":
        out = arr / (1.0 + params.sigma * (arr - 1.0))
    elif kind == "gustafson":
        out = arr * arr / (arr + params.sigma_prime * (arr - 1.0))
    elif kind == "superserial":
        out = superserial_capacity(arr, params.sigma, params.gamma)
    else:
        out = params.b * arr**params.a
    return float(out) if out.ndim == 0 else out


def superserial_capacity(n, sigma, gamma):
    n = np.asarray(n, dtype=float)
    return n / (1.0 + sigma * ((n - 1.0) + gamma * n * (n - 1.0)))


def amdahl_asymptote(sigma: float) -> float:
    """Upper bound 1/sigma approached by Amdahl capacity as N grows."""
    if sigma == 0:
        raise InputError("sigma=0: Amdahl capacity is unbounded")
    if not 0 < sigma <= 1:
        raise InputError(f"sigma={sigma} outside (0, 1]")
    return 1.0 / sigma


def superserial_nc(sigma: float, gamma: float) -> float:
    """Real core count maximizing super-serial capacity.

    Setting dC/dN = 0 for ``N / (1 + s[(N-1) + g N (N-1)])`` leaves
    ``(1 - s) - s g N^2 = 0``.
    """
    if sigma * gamma == 0:
        raise InputError("sigma*gamma = 0: super-serial capacity has no interior maximum")
    if not (0 < sigma <= 1 and 0 < gamma <= 1):
        raise InputError(f"sigma={sigma}, gamma={gamma} must lie in (0, 1]")
    return math.sqrt((1.0 - sigma) / (sigma * gamma))


def superserial_nc_int(sigma: float, gamma: float) -> int:
    """Integer core count with the larger capacity of floor/ceil of the real optimum."""
    nc = superserial_nc(sigma, gamma)
    lo, hi = max(1, math.floor(nc)), max(1, math.ceil(nc))
    c_lo = float(superserial_capacity(lo, sigma, gamma))
    c_hi = float(superserial_capacity(hi, sigma, gamma))
    return hi if c_hi > c_lo else lo
