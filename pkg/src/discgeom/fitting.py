"""Least-squares slope fitting on log-log data."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateFitError

__all__ = ["LineFit", "loglog_fit"]


@dataclass(frozen=True)
class LineFit:
    slope: float
    intercept: float
    r_squared: float
    count: int


def loglog_fit(xs, ys, min_points: int = 4) -> LineFit:
    """Ordinary least squares of log(y) against log(x).

    Pairs with non-positive entries are dropped.  Raises
    :class:`DegenerateFitError` with fewer than `min_points` usable pairs.
    A perfectly flat cloud fits slope 0 with r^2 = 1.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    keep = (xs > 0) & (ys > 0) & np.isfinite(xs) & np.isfinite(ys)
    xs, ys = xs[keep], ys[keep]
    if xs.size < min_points:
        raise DegenerateFitError(
            f"need at least {min_points} positive samples, have {xs.size}")
    lx, ly = np.log(xs), np.log(ys)
    mx, my = lx.mean(), ly.mean()
    dx, dy = lx - mx, ly - my
    sxx = float(dx @ dx)
    if sxx == 0.0:
        raise DegenerateFitError("all abscissae coincide")
    sxy = float(dx @ dy)
    syy = float(dy @ dy)
    slope = sxy / sxx
    intercept = my - slope * mx
    r2 = 1.0 if syy == 0.0 else min(1.0, sxy * sxy / (sxx * syy))
    return LineFit(slope=slope, intercept=intercept, r_squared=r2, count=int(xs.size))
