"""Built-in smooth scalar kernels used by the domain catalog.

Each kernel is a real function of one real variable given by explicit value,
first- and second-derivative procedures.  Dual-number arguments are lifted
through the derivative chain, so forward-mode differentiation of a defining
function propagates exactly through these pieces (no step-size tuning on the
numerically stiff flat-exponential profiles).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .scalars import Dual

__all__ = ["SmoothKernel", "flat_exp", "worm_phi", "flz1_chi", "flz2_psi"]


@dataclass(frozen=True)
class SmoothKernel:
    """A scalar function bundled with its first two derivatives."""

    name: str
    f0: Callable
    f1: Callable
    f2: Callable

    def __call__(self, x):
        return _apply(x, (self.f0, self.f1, self.f2))

    def derivative(self, x, order: int):
        if order == 0:
            return _apply(x, (self.f0, self.f1, self.f2))
        if order == 1:
            return _apply(x, (self.f1, self.f2))
        if order == 2:
            return _apply(x, (self.f2,))
        raise ValueError("kernels provide derivatives up to order 2")


def _apply(x, chain):
    """Evaluate chain[0] at x, recursing through dual layers via chain[1:]."""
    if isinstance(x, Dual):
        if len(chain) < 2:
            raise RuntimeError(
                "kernel differentiation depth exceeded (second-order duals are the limit)")
        v = _apply(x.value, chain)
        d = _apply(x.value, chain[1:])
        return Dual(v, tuple(d * p for p in x.partials))
    return chain[0](x)


def _piecewise(x, branches):
    """Evaluate [(predicate, fn)] branches; fn receives only matching values.

    `x` is a float or ndarray.  Predicates are checked in order; the last
    entry's predicate may be None (catch-all).
    """
    if np.ndim(x) == 0:
        x = float(x)
        for pred, fn in branches:
            if pred is None or pred(x):
                return fn(x)
        raise AssertionError("no branch matched")
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    remaining = np.ones(x.shape, dtype=bool)
    for pred, fn in branches:
        mask = remaining if pred is None else (remaining & pred(x))
        if np.any(mask):
            out[mask] = fn(x[mask])
        remaining &= ~mask
    return out


# --- exp(-u^(-alpha/2)) family ----------------------------------------------


def flat_exp(alpha: float, name: str | None = None) -> SmoothKernel:
    """E(u) = exp(-u^(-alpha/2)) for u > 0, extended by 0 for u <= 0.

    All derivatives vanish as u -> 0+, so the extension is smooth.  alpha = 2
    gives exp(-1/u).  Below `ucut` the double value underflows to 0 and the
    derivative prefactors would overflow, so everything is clamped to 0 there.
    """
    beta = alpha / 2.0
    ucut = max(700.0 ** (-1.0 / beta), 1e-12)

    def value(u):
        return _piecewise(u, [
            (lambda t: t <= ucut, lambda t: 0.0 * t),
            (None, lambda t: np.exp(-t ** (-beta))),
        ])

    def d1(u):
        return _piecewise(u, [
            (lambda t: t <= ucut, lambda t: 0.0 * t),
            (None, lambda t: np.exp(-t ** (-beta)) * beta * t ** (-beta - 1.0)),
        ])

    def d2(u):
        return _piecewise(u, [
            (lambda t: t <= ucut, lambda t: 0.0 * t),
            (None, lambda t: np.exp(-t ** (-beta)) * beta * t ** (-beta - 2.0)
                             * (beta * t ** (-beta) - (beta + 1.0))),
        ])

    return SmoothKernel(name or f"flat_exp(alpha={alpha:g})", value, d1, d2)


# --- worm profile phi --------------------------------------------------------

_T0 = 0.4  # junction between the exp(-1/t) ramp and the quadratic tail
_GA = float(np.exp(-1.0 / _T0))
_GB = _GA / _T0 ** 2
_GC = _GA * (1.0 / _T0 ** 4 - 2.0 / _T0 ** 3)
_PHI_SCALE = 8.0  # makes scale*g cross 1 inside the quadratic regime


def _g_value(t):
    return _piecewise(t, [
        (lambda u: u <= 1e-8, lambda u: 0.0 * u),
        (lambda u: u <= _T0, lambda u: np.exp(-1.0 / u)),
        (None, lambda u: _GA + _GB * (u - _T0) + 0.5 * _GC * (u - _T0) ** 2),
    ])


def _g_d1(t):
    return _piecewise(t, [
        (lambda u: u <= 1e-8, lambda u: 0.0 * u),
        (lambda u: u <= _T0, lambda u: np.exp(-1.0 / u) / u ** 2),
        (None, lambda u: _GB + _GC * (u - _T0)),
    ])


def _g_d2(t):
    return _piecewise(t, [
        (lambda u: u <= 1e-8, lambda u: 0.0 * u),
        (lambda u: u <= _T0, lambda u: np.exp(-1.0 / u) * (1.0 / u ** 4 - 2.0 / u ** 3)),
        (None, lambda u: _GC + 0.0 * u),
    ])


def worm_phi(beta: float) -> SmoothKernel:
    """Even convex profile with phi == 0 exactly on [-(beta-pi/2), beta-pi/2].

    phi(x) = scale * g(|x| - (beta - pi/2)) where g is 0 on (-inf, 0],
    exp(-1/t) on (0, 0.4] and the C^2 quadratic continuation beyond.  g is
    convex on its whole range (exp(-1/t) has g'' > 0 for t < 1/2), the kink
    of |x| sits inside the flat zone, and scale * g crosses 1 with positive
    slope inside the quadratic regime, which keeps the domain bounded in z2.
    """
    half = beta - np.pi / 2.0
    if half <= 0:
        raise ValueError("worm profile requires beta > pi/2")
    s = _PHI_SCALE

    def value(x):
        return s * _g_value(np.abs(x) - half)

    def d1(x):
        return np.sign(x) * s * _g_d1(np.abs(x) - half)

    def d2(x):
        return s * _g_d2(np.abs(x) - half)

    k = SmoothKernel(f"worm_phi(beta={beta:g})", value, d1, d2)
    object.__setattr__(k, "flat_halfwidth", half)
    return k


# --- FLZ example 1 profile chi ------------------------------------------------


def _quintic_hermite(width, fa, da, sa, fb, db, sb):
    """Coefficients of H(u) = sum c_k u^k on [0, width] matching C^2 data."""
    c0, c1, c2 = fa, da, 0.5 * sa
    w = width
    # remaining three coefficients from conditions at u = w
    mat = np.array([
        [w ** 3, w ** 4, w ** 5],
        [3 * w ** 2, 4 * w ** 3, 5 * w ** 4],
        [6 * w, 12 * w ** 2, 20 * w ** 3],
    ])
    rhs = np.array([
        fb - (c0 + c1 * w + c2 * w ** 2),
        db - (c1 + 2 * c2 * w),
        sb - 2 * c2,
    ])
    c3, c4, c5 = np.linalg.solve(mat, rhs)
    return np.array([c0, c1, c2, c3, c4, c5])


def flz1_chi(alpha: float = 0.5, eps: float = 5e-5, kappa: float = 0.1,
             tau: float = 0.05) -> SmoothKernel:
    """Profile that is 1 on [0,1], exponentially flat past 1, linear at infinity.

    Pieces: 1 on [0,1]; 1 + exp(-(t-1)^(-alpha/2)) on (1, 1+eps]; a C^2
    quintic bridge on (1+eps, 1+kappa); t - tau beyond.  The bridge matches
    value, slope and curvature at both junctions.  eps defaults well below
    kappa so the exponential piece hands over before its slope exceeds 1;
    larger eps values make the bridge non-monotone (chi stays >= 1 either
    way, which is all the catalog relies on away from the flat zone).
    """
    if not (kappa > eps > 0 and kappa > tau > 0):
        raise ValueError("require kappa > eps > 0 and kappa > tau > 0")
    ek = flat_exp(alpha)
    a, b = 1.0 + eps, 1.0 + kappa
    coeffs = _quintic_hermite(
        b - a,
        1.0 + ek.f0(eps), ek.f1(eps), ek.f2(eps),
        b - tau, 1.0, 0.0,
    )
    dc1 = np.polynomial.polynomial.polyder(coeffs)
    dc2 = np.polynomial.polynomial.polyder(coeffs, 2)
    pv = np.polynomial.polynomial.polyval

    def value(t):
        return _piecewise(t, [
            (lambda u: u <= 1.0, lambda u: 1.0 + 0.0 * u),
            (lambda u: u <= a, lambda u: 1.0 + ek.f0(u - 1.0)),
            (lambda u: u < b, lambda u: pv(u - a, coeffs)),
            (None, lambda u: u - tau),
        ])

    def d1(t):
        return _piecewise(t, [
            (lambda u: u <= 1.0, lambda u: 0.0 * u),
            (lambda u: u <= a, lambda u: ek.f1(u - 1.0)),
            (lambda u: u < b, lambda u: pv(u - a, dc1)),
            (None, lambda u: 1.0 + 0.0 * u),
        ])

    def d2(t):
        return _piecewise(t, [
            (lambda u: u <= 1.0, lambda u: 0.0 * u),
            (lambda u: u <= a, lambda u: ek.f2(u - 1.0)),
            (lambda u: u < b, lambda u: pv(u - a, dc2)),
            (None, lambda u: 0.0 * u),
        ])

    return SmoothKernel(f"flz1_chi(alpha={alpha:g})", value, d1, d2)


# --- FLZ example 2 profile, expressed in t = |z|^2 ----------------------------


def flz2_psi(alpha: float = 0.5, kappa: float = 0.1) -> SmoothKernel:
    """psi(t) = chi(sqrt(t)) for the second FLZ profile chi of |z|.

    chi(s) = 1-kappa for s <= 1-kappa and
    B * exp(-(s^2-(1-kappa)^2)^(-alpha/2)) + 1-kappa beyond, with B fixed by
    chi(1) = 1.  Substituting t = s^2 removes the square root, so psi is
    smooth in t and the |z| kink never reaches the evaluator.
    """
    gamma2 = (1.0 - kappa) ** 2
    bconst = kappa * np.exp((2.0 * kappa - kappa ** 2) ** (-alpha / 2.0))
    ek = flat_exp(alpha)

    def value(t):
        return (1.0 - kappa) + bconst * ek.f0(t - gamma2)

    def d1(t):
        return bconst * ek.f1(t - gamma2)

    def d2(t):
        return bconst * ek.f2(t - gamma2)

    return SmoothKernel(f"flz2_psi(alpha={alpha:g},kappa={kappa:g})", value, d1, d2)
