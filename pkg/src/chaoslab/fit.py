"""Least-squares fits for scaling studies.

Lines in log10-log10 space summarize how a discrepancy falls with sample
count; the plane fit z = alpha*x + beta*y + gamma (and its constrained
single-slope form z = alpha*(x - y) + gamma) summarizes two-variable scaling
of box count and iterate count together.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np


@dataclass(frozen=True)
class FitResult:
    model: str  # "line" | "loglog-line" | "plane" | "plane-diff"
    coefficients: tuple[float, ...]
    r: float
    n_points: int


@dataclass(frozen=True)
class PlaneFit:
    full: FitResult         # z = a*x + b*y + c, coefficients (a, b, c)
    constrained: FitResult  # z = a*(x - y) + c, coefficients (a, c)


def _clean(name: str, v: Sequence[float]) -> np.ndarray:
    arr = np.asarray(v, dtype=np.float64).ravel()
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    return arr


def linfit(xs: Sequence[float], ys: Sequence[float],
           model: str = "line") -> FitResult:
    """Ordinary least squares line y = slope*x + intercept.

    r is the Pearson correlation of x and y (signed, so a falling law has
    r near -1). Requires at least two distinct x values. When y has zero
    variance the fit is exact and r is reported as 1.0.
    """
    x = _clean("x", xs)
    y = _clean("y", ys)
    if x.size != y.size:
        raise ValueError("x and y lengths differ")
    n = x.size
    if n < 2:
        raise ValueError("need at least two points")
    mx = math.fsum(x) / n
    my = math.fsum(y) / n
    dx = [float(v) - mx for v in x]
    dy = [float(v) - my for v in y]
    var_x = math.fsum(d * d for d in dx)
    var_y = math.fsum(d * d for d in dy)
    cov = math.fsum(a * b for a, b in zip(dx, dy))
    if var_x == 0.0:
        raise ValueError("all x values coincide; slope undefined")
    slope = cov / var_x
    intercept = my - slope * mx
    if var_y == 0.0:
        r = 1.0  # constant response, fit exact
    else:
        r = cov / math.sqrt(var_x * var_y)
        r = max(-1.0, min(1.0, r))
    return FitResult(model, (slope, intercept), r, n)


def scaling_fit(counts: Sequence[float], errors: Sequence[float]) -> FitResult:
    """Power-law fit: line through (log10 count, log10 error).

    coefficients = (slope, intercept); error ~ 10^intercept * count^slope.
    """
    c = _clean("counts", counts)
    e = _clean("errors", errors)
    if np.any(c <= 0.0) or np.any(e <= 0.0):
        raise ValueError("power-law fits need positive counts and errors")
    return linfit(np.log10(c), np.log10(e), model="loglog-line")


def planefit(xs: Sequence[float], ys: Sequence[float],
             zs: Sequence[float]) -> PlaneFit:
    """Least-squares plane z = a*x + b*y + c plus the constrained
    single-slope form z = a*(x - y) + c.

    The full fit reports r as the correlation between fitted and observed z
    (nonnegative); a constant z is reproduced by the intercept alone, so it
    reports r = 1.0 like the line fit does. Degenerate point geometry
    (all (x, y) collinear) is rejected.
    """
    x = _clean("x", xs)
    y = _clean("y", ys)
    z = _clean("z", zs)
    if not (x.size == y.size == z.size):
        raise ValueError("x, y, z lengths differ")
    n = x.size
    if n < 3:
        raise ValueError("need at least three points")
    design = np.column_stack([x, y, np.ones(n)])
    coef, _, rank, _ = np.linalg.lstsq(design, z, rcond=None)
    if rank < 3:
        raise ValueError("degenerate geometry: (x, y) points are collinear")
    fitted = design @ coef
    var_f = float(np.var(fitted))
    var_z = float(np.var(z))
    if var_z == 0.0:
        r = 1.0  # constants are in the column span: residual is zero
    elif var_f == 0.0:
        r = 0.0  # z varies but the fit is flat
    else:
        cov = float(np.mean((fitted - fitted.mean()) * (z - z.mean())))
        r = cov / math.sqrt(var_f * var_z)
        r = max(-1.0, min(1.0, r))
    full = FitResult("plane", (float(coef[0]), float(coef[1]),
                               float(coef[2])), r, n)
    diff = linfit(x - y, z, model="plane-diff")
    return PlaneFit(full=full, constrained=diff)
