"""Hoelder exponents of holomorphic test functions near the boundary.

The gain phenomenon: a holomorphic function of Lipschitz class alpha varies
like |h|^(k*alpha) along complex-tangential displacements of size h at depth
delta, once h is capped at c2*delta^(1/k)/10.  Tangential displacements here
follow the boundary-parallel tangential flow (the straight chord from
Q = p - delta*N stays inside the tangent plane, where half-space test
functions are constant; the flow picks up the boundary's bending, which is
what the difference quotients respond to).  The normal exponent is measured
on the inward ray from p itself, where the test function's modulus of
continuity is undiluted.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .domains import Domain
from .errors import DegenerateFitError, ExitDomainError, SupportFailureError
from .fitting import loglog_fit
from .geometry import (
    BoundaryPoint,
    Curve,
    Frame,
    frame_at,
    herm,
    integrate_tangential_curve,
)
from .numdiff import wirtinger_first

__all__ = [
    "HoloTestFunction", "HoelderEstimate", "HPolicy", "GainReport",
    "DerivativeGrowth", "make_halfspace_power", "hoelder_exponent",
    "tangential_gain", "derivative_growth", "curve_gain", "cauchy_riemann_gap",
]

_FLAT_FLOOR = 1e-14


@dataclass(frozen=True)
class HoloTestFunction:
    """Holomorphic test function; halfspace_power is (c - <z, a>)^alpha.

    <z, a> = sum_j z_j a_j is complex-bilinear, so the base is holomorphic;
    the principal branch is well defined while Re(base) > 0, which the
    support check samples.  `user` kind wraps an arbitrary callable.
    """

    kind: str  # "halfspace_power" | "coordinate_power" | "user"
    alpha: float
    anchor: tuple | None = None
    const: complex | None = None
    fn: object = None

    def __call__(self, z) -> complex:
        if self.kind == "user":
            return complex(self.fn(z))
        base = self.const - np.dot(np.asarray(z, dtype=complex),
                                   np.asarray(self.anchor, dtype=complex))
        if base == 0:
            return 0j
        return complex(base) ** self.alpha


@dataclass(frozen=True)
class HoelderEstimate:
    exponent: float
    log_constant: float
    r_squared: float
    h_range: tuple
    flat: bool = False
    count: int = 0


@dataclass(frozen=True)
class HPolicy:
    """Sampling policy for gain measurements.

    Tangential offsets per delta live in [frac_lo, frac_hi] * cap with
    cap = c2 * delta^(1/k) * cap_fraction; a narrow band keeps the pooled
    fit on the cross-delta envelope rather than the within-delta curvature.
    """

    c2: float = 1.0
    cap_fraction: float = 0.1
    frac_lo: float = 0.9
    frac_hi: float = 1.0
    h_per_delta: int = 3
    curve_steps: int = 40
    normal_h: tuple = (1e-5, 1e-3, 9)


@dataclass(frozen=True)
class GainReport:
    normal: HoelderEstimate
    tangential: HoelderEstimate
    ratio: float | None
    samples: tuple = field(default_factory=tuple)  # (delta, s, |df|) rows


@dataclass(frozen=True)
class DerivativeGrowth:
    slope: float
    r_squared: float
    samples: tuple  # (delta, |f'|) rows
    mode: str


# --- construction ---------------------------------------------------------------


def make_halfspace_power(d: Domain, p: BoundaryPoint, alpha: float,
                         samples: int = 1000,
                         rng: np.random.Generator | None = None) -> HoloTestFunction:
    """(⟨p - z, a⟩)^alpha with a the unit complex normal covector at p.

    Verifies Re(base) > 0 on `samples` interior points; raises
    :class:`SupportFailureError` (with a violating sample) when the domain is
    not supported by the half-space, e.g. at annulus points of a worm domain.
    Callers must then supply a user-kind function instead.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    dz = wirtinger_first(d.func, p.p).dz
    a = dz / np.linalg.norm(dz)
    const = complex(np.dot(p.p, a))
    pts = d.sample_interior(samples, rng or np.random.default_rng(0))
    bases = const - pts @ a
    worst = int(np.argmin(bases.real))
    if bases.real[worst] <= 0.0:
        raise SupportFailureError(
            f"half-space at the point does not support {d.name}: interior sample "
            f"with Re(base) = {bases.real[worst]:.3e}",
            sample=tuple(pts[worst]))
    return HoloTestFunction(kind="halfspace_power", alpha=alpha,
                            anchor=tuple(a), const=const)


def cauchy_riemann_gap(f, z, v, h: float = 1e-5) -> float:
    """Relative gap between difference quotients along v and along iv.

    Both approximate the complex directional derivative, so the gap is a
    holomorphy witness (small for holomorphic f).
    """
    z = np.asarray(z, dtype=complex)
    v = np.asarray(v, dtype=complex)
    d1 = (f(z + h * v) - f(z - h * v)) / (2.0 * h)
    d2 = (f(z + 1j * h * v) - f(z - 1j * h * v)) / (2j * h)
    scale = max(abs(d1), abs(d2), 1e-300)
    return abs(d1 - d2) / scale


# --- exponent fits ----------------------------------------------------------------


def _check_inside(domain: Domain | None, pt):
    if domain is None:
        return
    if not domain.in_box(pt) or domain.value(pt) >= 0.0:
        raise ExitDomainError("difference sample left the domain")


def hoelder_exponent(f, Q, v, h_grid, phases: int = 8,
                     domain: Domain | None = None) -> HoelderEstimate:
    """Fit of log max_phase |f(Q + h e^{i phi} v) - f(Q)| against log h.

    All samples must lie in the domain when one is supplied.  Differences at
    double-precision noise are dropped; if everything is noise the estimate
    is reported flat rather than fitted.
    """
    Q = np.asarray(Q, dtype=complex)
    v = np.asarray(v, dtype=complex)
    f0 = f(Q)
    floor = _FLAT_FLOOR * max(1.0, abs(f0))
    hs, ds = [], []
    for h in np.asarray(h_grid, dtype=float):
        best = 0.0
        for k in range(phases):
            w = h * np.exp(1j * (2.0 * np.pi * k / phases)) if phases > 1 else h
            pt = Q + w * v
            _check_inside(domain, pt)
            best = max(best, abs(f(pt) - f0))
        if best > floor:
            hs.append(h)
            ds.append(best)
    if not hs:
        grid = np.asarray(h_grid, dtype=float)
        return HoelderEstimate(float("nan"), float("nan"), float("nan"),
                               (float(grid.min()), float(grid.max())),
                               flat=True, count=0)
    if len(hs) < 4:
        raise DegenerateFitError(f"only {len(hs)} usable difference samples")
    fit = loglog_fit(hs, ds)
    return HoelderEstimate(exponent=fit.slope, log_constant=fit.intercept,
                           r_squared=fit.r_squared,
                           h_range=(min(hs), max(hs)), count=fit.count)


def _parallel_samples(d: Domain, f, Q, direction, s_values, step: float,
                      delta0: float):
    """f along the boundary-parallel tangential flow from Q, at arclengths
    s_values (multiples of the integration step)."""
    length = float(max(s_values))
    curve = integrate_tangential_curve(d, Q, ("ambient", direction), length,
                                       step, delta0=delta0)
    f0 = f(curve.samples[0][1])
    out = []
    for s in s_values:
        idx = int(round(s / step))
        t, z = curve.samples[idx]
        out.append((t, abs(f(z) - f0)))
    return out, abs(f0)


def tangential_gain(d: Domain, f, p: BoundaryPoint, k: int, deltas=None,
                    h_policy: HPolicy | None = None, direction=None,
                    frame: Frame | None = None) -> GainReport:
    """Pooled tangential exponent at Q = p - delta*N against the normal one.

    Per delta, tangential offsets are capped at c2*delta^(1/k)/10 and the
    difference |f(gamma(s)) - f(Q)| is taken along the tangential flow from
    Q; the (log s, log diff) cloud pooled over the delta grid is fitted once.
    The normal exponent comes from the inward ray at p.  Reports both
    estimates and their ratio.
    """
    pol = h_policy or HPolicy()
    if deltas is None:
        deltas = np.geomspace(1e-6, 1e-2, 12)
    deltas = np.asarray(deltas, dtype=float)
    frame = frame or frame_at(d, p)
    if direction is None:
        L = frame.L[0]
    else:
        L = np.asarray(direction, dtype=complex)
        L = L - herm(L, frame.nu) * frame.nu
        L = L / np.linalg.norm(L)

    lo, hi, cnt = pol.normal_h
    normal = hoelder_exponent(f, p.p, -frame.N, np.geomspace(lo, hi, int(cnt)),
                              phases=1, domain=d)

    fracs = np.linspace(pol.frac_lo, pol.frac_hi, pol.h_per_delta)
    pooled_s, pooled_d, rows = [], [], []
    fscale = 1.0
    for delta in deltas:
        Q = p.p - delta * frame.N
        cap = pol.c2 * delta ** (1.0 / k) * pol.cap_fraction
        # snap arclengths onto the integration grid
        step = cap / pol.curve_steps
        s_values = [round(float(fr) * cap / step) * step for fr in fracs]
        samples, f0 = _parallel_samples(d, f, Q, L, s_values, step,
                                        delta0=max(0.25, 10.0 * delta))
        fscale = max(fscale, f0)
        for s, diff in samples:
            rows.append((float(delta), float(s), float(diff)))
            if diff > _FLAT_FLOOR * max(1.0, f0):
                pooled_s.append(s)
                pooled_d.append(diff)
    if not pooled_s:
        tangential = HoelderEstimate(float("nan"), float("nan"), float("nan"),
                                     (0.0, 0.0), flat=True, count=0)
    else:
        fit = loglog_fit(pooled_s, pooled_d)
        tangential = HoelderEstimate(exponent=fit.slope, log_constant=fit.intercept,
                                     r_squared=fit.r_squared,
                                     h_range=(min(pooled_s), max(pooled_s)),
                                     count=fit.count)
    ratio = None
    if not tangential.flat and not normal.flat and normal.exponent:
        ratio = tangential.exponent / normal.exponent
    return GainReport(normal=normal, tangential=tangential, ratio=ratio,
                      samples=tuple(rows))


def derivative_growth(d: Domain, f, p: BoundaryPoint, v, deltas=None,
                      mode: str = "line", k_for_step: int = 2,
                      frame: Frame | None = None) -> DerivativeGrowth:
    """Slope of log |directional derivative of f at p - delta*N| vs log delta.

    mode="line": fourth-order central differences of t -> f(Q + t v), step
    0.01*delta along near-normal directions and 0.01*delta^(1/k) along
    tangential ones (stencil shifted inward off the boundary for the normal
    ray).  mode="curve": the derivative of f along the tangential flow,
    evaluated at arclength 0.01*delta^(1/k); this is the measurable analogue
    of the mixed tangential-normal derivative bounds, nonzero even where the
    straight-line tangential derivative vanishes identically.
    """
    if deltas is None:
        deltas = np.geomspace(1e-6, 1e-2, 12)
    deltas = np.asarray(deltas, dtype=float)
    frame = frame or frame_at(d, p)
    v = np.asarray(v, dtype=complex)
    v = v / np.linalg.norm(v)
    normal_like = abs(herm(v, frame.nu)) > 0.9

    rows = []
    for delta in deltas:
        Q = p.p - delta * frame.N
        if mode == "line":
            tau = 0.01 * delta if normal_like else 0.01 * delta ** (1.0 / k_for_step)
            t0 = 2.5 * tau if normal_like else 0.0
            stencil = [t0 - 2 * tau, t0 - tau, t0 + tau, t0 + 2 * tau]
            pts = [Q + t * v for t in stencil]
            for pt in pts:
                if not d.in_box(pt) or d.value(pt) >= 0.0:
                    raise ExitDomainError("derivative stencil left the domain")
            g = [f(pt) for pt in pts]
            deriv = (g[0] - 8 * g[1] + 8 * g[2] - g[3]) / (12.0 * tau)
        elif mode == "curve":
            s0 = 0.01 * delta ** (1.0 / k_for_step)
            step = s0 / 8.0
            curve = integrate_tangential_curve(d, Q, ("ambient", v), 1.5 * s0,
                                               step, delta0=max(0.25, 10.0 * delta))
            g = [f(curve.samples[i][1]) for i in (4, 6, 10, 12)]
            deriv = (g[0] - 8 * g[1] + 8 * g[2] - g[3]) / (12.0 * (s0 / 4.0))
        else:
            raise ValueError(f"unknown mode {mode!r}")
        rows.append((float(delta), abs(deriv)))
    ds = [r[0] for r in rows]
    vals = [r[1] for r in rows]
    fit = loglog_fit(ds, vals)
    return DerivativeGrowth(slope=fit.slope, r_squared=fit.r_squared,
                            samples=tuple(rows), mode=mode)


def curve_gain(d: Domain, f, curve: Curve) -> HoelderEstimate:
    """Fit of log |f(gamma(s)) - f(gamma(0))| against log s over curve samples.

    Differences below 1e-14 (relative to |f(gamma(0))|) are noise; an
    all-noise curve is reported flat.
    """
    f0 = f(curve.samples[0][1])
    floor = _FLAT_FLOOR * max(1.0, abs(f0))
    ss, ds = [], []
    smax = 0.0
    for t, z in curve.samples[1:]:
        smax = max(smax, t)
        diff = abs(f(z) - f0)
        if diff > floor:
            ss.append(t)
            ds.append(diff)
    if not ss:
        return HoelderEstimate(float("nan"), float("nan"), float("nan"),
                               (0.0, smax), flat=True, count=0)
    if len(ss) < 4:
        raise DegenerateFitError(f"only {len(ss)} usable curve differences")
    fit = loglog_fit(ss, ds)
    return HoelderEstimate(exponent=fit.slope, log_constant=fit.intercept,
                           r_squared=fit.r_squared, h_range=(min(ss), max(ss)),
                           count=fit.count)
