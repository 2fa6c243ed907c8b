"""Derivatives of real-valued functions on C^n via forward-mode duals.

The "evaluable" contract: a callable `f(zs)` taking a sequence of n
:class:`~discgeom.cnum.Cx` coordinates whose parts belong to a common scalar
ring, returning a real scalar of that ring.  Defining functions from the
domain catalog and DSL closures both satisfy it.

Coordinates of C^n are identified with R^{2n} in the order
(x1, y1, ..., xn, yn).  Wirtinger derivatives follow the convention
d/dz = (d/dx - i d/dy)/2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cnum import Cx
from .scalars import Dual, scalar_float

__all__ = [
    "WirtingerData", "real_gradient", "directional_derivative",
    "wirtinger_first", "real_hessian", "complex_hessian", "fd_crosscheck",
]


@dataclass(frozen=True)
class WirtingerData:
    """First Wirtinger derivatives r_{z_j} and r_{zbar_j} at a point."""

    dz: np.ndarray
    dzbar: np.ndarray


def _coords(z):
    return [(float(c.real), float(c.imag)) for c in (complex(c) for c in z)]


def real_gradient(f, z) -> np.ndarray:
    """(dr/dx1, dr/dy1, ..., dr/dxn, dr/dyn); exact for polynomial nodes."""
    xy = _coords(z)
    m = 2 * len(xy)
    zs = [Cx(Dual.seed(x, 2 * j, m), Dual.seed(y, 2 * j + 1, m))
          for j, (x, y) in enumerate(xy)]
    out = f(zs)
    if not isinstance(out, Dual):
        return np.zeros(m)
    return np.array([scalar_float(p) for p in out.partials])


def directional_derivative(f, z, direction) -> float:
    """d/dt f(z + t*v) at t=0 for a real direction v in R^{2n}."""
    xy = _coords(z)
    v = np.asarray(direction, dtype=float)
    zs = [Cx(Dual(x, (v[2 * j],)), Dual(y, (v[2 * j + 1],)))
          for j, (x, y) in enumerate(xy)]
    out = f(zs)
    if not isinstance(out, Dual):
        return 0.0
    return scalar_float(out.partials[0])


def wirtinger_first(f, z) -> WirtingerData:
    g = real_gradient(f, z)
    gx, gy = g[0::2], g[1::2]
    dz = 0.5 * (gx - 1j * gy)
    return WirtingerData(dz=dz, dzbar=0.5 * (gx + 1j * gy))


def real_hessian(f, z) -> np.ndarray:
    """Full 2n x 2n second-derivative matrix via one nested-dual sweep."""
    xy = _coords(z)
    m = 2 * len(xy)

    def seed(x, k):
        return Dual(Dual.seed(x, k, m), tuple(1.0 if j == k else 0.0 for j in range(m)))

    zs = [Cx(seed(x, 2 * j), seed(y, 2 * j + 1)) for j, (x, y) in enumerate(xy)]
    out = f(zs)
    hess = np.zeros((m, m))
    if not isinstance(out, Dual):
        return hess
    for k in range(m):
        row = out.partials[k]
        if isinstance(row, Dual):
            hess[k, :] = [scalar_float(p) for p in row.partials]
    return hess


def complex_hessian(f, z) -> np.ndarray:
    """Matrix of r_{z_j zbar_k}; Hermitian up to rounding for real-valued r."""
    h = real_hessian(f, z)
    n = len(z)
    out = np.empty((n, n), dtype=complex)
    for j in range(n):
        for k in range(n):
            xx = h[2 * j, 2 * k]
            yy = h[2 * j + 1, 2 * k + 1]
            xy = h[2 * j, 2 * k + 1]
            yx = h[2 * j + 1, 2 * k]
            out[j, k] = 0.25 * ((xx + yy) + 1j * (xy - yx))
    return out


def _value_at(f, xy_flat):
    zs = [Cx(xy_flat[2 * j], xy_flat[2 * j + 1]) for j in range(len(xy_flat) // 2)]
    return float(f(zs))


def fd_crosscheck(f, z, h: float) -> float:
    """Max relative gap between the dual gradient and central differences.

    Relative to max(1, |component|) so flat directions do not blow up the
    ratio.  Returns 0 exactly for linear functions sampled at representable
    offsets.
    """
    if h <= 0:
        raise ValueError("step must be positive")
    grad = real_gradient(f, z)
    flat = np.array([c for pair in _coords(z) for c in pair], dtype=float)
    worst = 0.0
    for k in range(flat.size):
        bumped = flat.copy()
        bumped[k] = flat[k] + h
        fp = _value_at(f, bumped)
        bumped[k] = flat[k] - h
        fm = _value_at(f, bumped)
        fd = (fp - fm) / (2.0 * h)
        gap = abs(fd - grad[k]) / max(1.0, abs(grad[k]))
        worst = max(worst, gap)
    return worst
