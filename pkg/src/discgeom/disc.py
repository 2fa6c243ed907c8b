"""Bidisc containment, maximal tangential radii, and disc-index estimation.

The disc property of index k at a boundary point p asks for bidiscs

    {Q - w1*N + w2*L : |w1| <= c1*delta, |w2| <= c2*delta^(1/k)},  Q = p - delta*N,

inside the domain for all small delta.  Containment here is sample-certified:
a deterministic polar lattice over the closed bidisc plus one local
refinement pass around the worst sample.  Closed-form worst cases in the
test-suite quantify the residual risk on the catalog domains.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .domains import Domain
from .errors import (
    CenterOutsideError,
    DiscAnalysisError,
    InsufficientDataError,
    LocalityError,
)
from .fitting import loglog_fit
from .geometry import BoundaryPoint, Frame, frame_at, herm

__all__ = [
    "SamplingConfig", "DiscQuery", "Witness", "ContainmentResult",
    "RadiusProfile", "IndexEstimate", "SweepReport",
    "embed", "contains_bidisc", "max_tangential_radius", "radius_profile",
    "estimate_index", "uniform_sweep", "default_delta_grid",
]


def default_delta_grid(lo: float = 1e-6, hi: float = 1e-2, count: int = 12):
    """Geometric delta grid; the 1e-6 floor keeps the flat-exponential
    profiles above double-precision noise."""
    return np.geomspace(lo, hi, count)


@dataclass(frozen=True)
class SamplingConfig:
    radial: int = 6
    angular: int = 24
    refine_iters: int = 20


@dataclass(frozen=True)
class DiscQuery:
    p: BoundaryPoint
    L: np.ndarray
    c1: float
    c2: float
    k: int
    delta: float

    def __post_init__(self):
        if not 0.0 < self.c1 < 1.0:
            raise DiscAnalysisError("c1 must lie in (0, 1)")
        if self.c2 <= 0.0 or self.k < 1 or self.delta <= 0.0:
            raise DiscAnalysisError("require c2 > 0, k >= 1, delta > 0")
        if self.delta > 0.25 * self.p.domain.diameter_hint:
            raise DiscAnalysisError("delta exceeds the domain's trusted range")


@dataclass(frozen=True)
class Witness:
    """A sample certifying non-containment.

    kind: "value" (r >= 0 there), "guard" (excluded locus / undefined), or
    "locality" (left the domain's validity box).
    """

    point: np.ndarray
    w1: complex
    w2: complex
    r_value: float
    kind: str


@dataclass(frozen=True)
class ContainmentResult:
    contained: bool
    witness: Witness | None
    max_r: float
    samples: int

    def __iter__(self):  # unpack as (bool, witness)
        yield self.contained
        yield self.witness


@dataclass(frozen=True)
class RadiusProfile:
    """Sampled (delta, rho(delta)) with rho the maximal certified tangential
    radius at normal-disc fraction c1."""

    deltas: np.ndarray
    rhos: np.ndarray
    c1: float
    sampling: dict = field(default_factory=dict)
    failures: tuple = ()

    def __post_init__(self):
        if len(self.deltas) != len(self.rhos):
            raise DiscAnalysisError("profile length mismatch")
        if np.any(np.asarray(self.rhos) <= 0):
            raise DiscAnalysisError("profile radii must be positive")


@dataclass(frozen=True)
class IndexEstimate:
    slope: float
    k_hat: float
    r_squared: float
    verdict: str  # "finite" | "exceeds_cap" | "inconclusive"
    k_cap: int


def embed(Q, N, L, w1, w2) -> np.ndarray:
    """Q - w1*N + w2*L; complex scalars act componentwise (J = mult by i)."""
    Q = np.asarray(Q, dtype=complex)
    N = np.asarray(N, dtype=complex)
    L = np.asarray(L, dtype=complex)
    return Q - complex(w1) * N + complex(w2) * L


def _polar_lattice(rmax: float, radial: int, angular: int):
    """Closed-disc sample set {0} plus full circles; returns complex samples."""
    if rmax == 0.0:
        return np.zeros(1, dtype=complex)
    radii = np.linspace(0.0, rmax, radial)[1:]
    angles = 2.0 * np.pi * np.arange(angular) / angular
    grid = (radii[:, None] * np.exp(1j * angles)[None, :]).ravel()
    return np.concatenate(([0.0 + 0.0j], grid))


def _bidisc_scan(d: Domain, Q, N, L, r1: float, r2: float,
                 sampling: SamplingConfig) -> ContainmentResult:
    w1s = _polar_lattice(r1, sampling.radial, sampling.angular)
    w2s = _polar_lattice(r2, sampling.radial, sampling.angular)
    W1 = np.repeat(w1s, len(w2s))
    W2 = np.tile(w2s, len(w1s))
    pts = Q[None, :] - W1[:, None] * N[None, :] + W2[:, None] * L[None, :]

    inside = d.batch_in_box(pts)
    if not inside.all():
        i = int(np.argmin(inside))
        return ContainmentResult(False, Witness(pts[i], W1[i], W2[i],
                                                float("nan"), "locality"),
                                 float("nan"), len(W1))
    vals = d.value_batch(pts)
    bad = ~np.isfinite(vals)
    if bad.any():
        i = int(np.argmax(bad))
        return ContainmentResult(False, Witness(pts[i], W1[i], W2[i],
                                                float("nan"), "guard"),
                                 float("nan"), len(W1))
    imax = int(np.argmax(vals))
    if vals[imax] >= 0.0:
        return ContainmentResult(False, Witness(pts[imax], W1[imax], W2[imax],
                                                float(vals[imax]), "value"),
                                 float(vals[imax]), len(W1))

    refined = _refine_max(d, Q, N, L, r1, r2, W1[imax], W2[imax],
                          sampling)
    if refined is not None:
        w1r, w2r, rv = refined
        if rv >= 0.0:
            return ContainmentResult(False, Witness(embed(Q, N, L, w1r, w2r),
                                                    w1r, w2r, rv, "value"),
                                     rv, len(W1))
        return ContainmentResult(True, None, max(float(vals[imax]), rv), len(W1))
    return ContainmentResult(True, None, float(vals[imax]), len(W1))


def _refine_max(d: Domain, Q, N, L, r1, r2, w1, w2, sampling: SamplingConfig):
    """Coordinate search in (rho1, th1, rho2, th2) from the lattice maximum."""

    def params_of(w, rmax):
        return (abs(w), float(np.angle(w))) if rmax > 0 else (0.0, 0.0)

    def eval_at(state):
        rho1, th1, rho2, th2 = state
        w1c = rho1 * np.exp(1j * th1)
        w2c = rho2 * np.exp(1j * th2)
        pt = embed(Q, N, L, w1c, w2c)
        if not d.in_box(pt):
            return None, w1c, w2c
        val = d.value_batch(pt[None, :])[0]
        if not np.isfinite(val):
            return None, w1c, w2c
        return float(val), w1c, w2c

    state = [*params_of(w1, r1), *params_of(w2, r2)]
    best, bw1, bw2 = eval_at(state)
    if best is None:
        return None
    steps = [max(r1, 1e-300) / max(sampling.radial - 1, 1), np.pi / sampling.angular,
             max(r2, 1e-300) / max(sampling.radial - 1, 1), np.pi / sampling.angular]
    caps = [r1, None, r2, None]
    for _ in range(sampling.refine_iters):
        improved = False
        for i in range(4):
            if caps[i] == 0.0:
                continue
            for sgn in (1.0, -1.0):
                trial = list(state)
                trial[i] = state[i] + sgn * steps[i]
                if caps[i] is not None:
                    trial[i] = min(max(trial[i], 0.0), caps[i])
                val, w1c, w2c = eval_at(trial)
                if val is not None and val > best:
                    state, best, bw1, bw2 = trial, val, w1c, w2c
                    improved = True
        if not improved:
            steps = [s * 0.5 for s in steps]
    return bw1, bw2, best


def _center_of(q_p: BoundaryPoint, delta: float, frame: Frame):
    d = q_p.domain
    Q = q_p.p - delta * frame.N
    if not d.in_box(q_p.p) or not d.in_box(Q):
        raise LocalityError(
            f"{d.name}: query leaves the validity box (|z| <= {d.box})")
    return Q


def contains_bidisc(q: DiscQuery, sampling: SamplingConfig | None = None,
                    frame: Frame | None = None) -> ContainmentResult:
    """Sample-certified containment of the index-k bidisc in the domain.

    Guard and locality violations among the samples count as non-containment
    and are reported through the witness kind.
    """
    sampling = sampling or SamplingConfig()
    d = q.p.domain
    frame = frame or frame_at(d, q.p)
    Q = _center_of(q.p, q.delta, frame)
    r1 = q.c1 * q.delta
    r2 = q.c2 * q.delta ** (1.0 / q.k)
    return _bidisc_scan(d, Q, frame.N, np.asarray(q.L, dtype=complex), r1, r2,
                        sampling)


def max_tangential_radius(d: Domain, p: BoundaryPoint, L, c1: float,
                          delta: float, sampling: SamplingConfig | None = None,
                          rel_tol: float = 1e-3,
                          frame: Frame | None = None) -> float:
    """Largest sample-certified tangential radius by bisection.

    Bracket [0, diameter]; returns the largest rho whose bidisc
    (|w1| <= c1*delta, |w2| <= rho) was certified, 0.0 if none was.
    """
    sampling = sampling or SamplingConfig()
    frame = frame or frame_at(d, p)
    L = np.asarray(L, dtype=complex)
    Q = _center_of(p, delta, frame)
    if d.value(Q) >= 0.0:
        raise CenterOutsideError(f"r(p - delta*N) >= 0 at delta={delta:g}")

    def ok(rho):
        return _bidisc_scan(d, Q, frame.N, L, c1 * delta, rho, sampling).contained

    lo, hi = 0.0, float(d.diameter_hint)
    if ok(hi):
        return hi
    for _ in range(80):
        if lo > 0.0 and hi - lo <= rel_tol * lo:
            break
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if ok(mid):
            lo = mid
        else:
            hi = mid
    return lo


def radius_profile(d: Domain, p: BoundaryPoint, L, c1: float = 0.5,
                   deltas=None, sampling: SamplingConfig | None = None,
                   min_successes: int = 6) -> RadiusProfile:
    """rho(delta) over a geometric grid; per-delta failures become gaps."""
    if deltas is None:
        deltas = default_delta_grid()
    sampling = sampling or SamplingConfig()
    frame = frame_at(d, p)
    got_d, got_r, failures = [], [], []
    for delta in np.asarray(deltas, dtype=float):
        try:
            rho = max_tangential_radius(d, p, L, c1, delta, sampling, frame=frame)
        except (CenterOutsideError, LocalityError, DiscAnalysisError) as exc:
            failures.append((float(delta), str(exc)))
            continue
        if rho <= 0.0:
            failures.append((float(delta), "no positive certified radius"))
            continue
        got_d.append(float(delta))
        got_r.append(float(rho))
    if len(got_d) < min_successes:
        raise InsufficientDataError(
            f"only {len(got_d)} of {len(deltas)} deltas produced radii")
    return RadiusProfile(deltas=np.array(got_d), rhos=np.array(got_r), c1=c1,
                         sampling={"radial": sampling.radial,
                                   "angular": sampling.angular,
                                   "refine_iters": sampling.refine_iters},
                         failures=tuple(failures))


def estimate_index(profile: RadiusProfile, k_cap: int = 8) -> IndexEstimate:
    """OLS slope of log rho vs log delta; k_hat = 1/slope.

    Verdict: "finite" when the slope lies in [1/k_cap, 1.05] with r^2 >= 0.98,
    "exceeds_cap" when the slope falls below 1/k_cap (the profile decays
    slower than delta^{1/k_cap}), otherwise "inconclusive".
    """
    if len(profile.deltas) < 6:
        raise InsufficientDataError("need at least 6 profile points")
    fit = loglog_fit(profile.deltas, profile.rhos, min_points=6)
    s = fit.slope
    if s < 1.0 / k_cap:
        verdict = "exceeds_cap"
    elif s <= 1.05 and fit.r_squared >= 0.98:
        verdict = "finite"
    else:
        verdict = "inconclusive"
    k_hat = float("inf") if s == 0.0 else 1.0 / s
    return IndexEstimate(slope=s, k_hat=k_hat, r_squared=fit.r_squared,
                         verdict=verdict, k_cap=k_cap)


# --- uniform sweeps -------------------------------------------------------------


@dataclass(frozen=True)
class SweepReport:
    uniform: bool
    entries: tuple          # per (point, direction): dict with per-delta results
    failures: tuple         # (point_index, direction_index, delta, witness)
    best_constants: tuple | None  # (c1, c2, delta0) from the lattice, if searched


def _tangential_directions(frame: Frame, directions):
    if directions is None:
        return [frame.L[i] for i in range(frame.L.shape[0])]
    out = []
    for v in directions:
        v = np.asarray(v, dtype=complex)
        v = v - herm(v, frame.nu) * frame.nu
        norm = float(np.linalg.norm(v))
        if norm < 1e-8:
            raise DiscAnalysisError("sweep direction is normal to the boundary")
        out.append(v / norm)
    return out


def uniform_sweep(d: Domain, patch, k: int, c1: float, c2: float, deltas=None,
                  directions=None, sampling: SamplingConfig | None = None,
                  lattice_factors=None) -> SweepReport:
    """Containment of index-k bidiscs across a boundary patch.

    Runs contains_bidisc for every (point, tangential direction, delta).
    With `lattice_factors`, also searches the lattice
    {(c1*fa, c2*fb)} for the largest constants passing everywhere (ordered
    by decreasing product), reported as (c1, c2, delta0 = max delta).
    """
    if deltas is None:
        deltas = default_delta_grid(1e-5, 1e-3, 5)
    deltas = np.asarray(deltas, dtype=float)
    sampling = sampling or SamplingConfig()
    frames = [frame_at(d, p) for p in patch]
    dirsets = [_tangential_directions(fr, directions) for fr in frames]

    def run(c1v, c2v, collect):
        all_pass = True
        for ip, (p, fr, dirs) in enumerate(zip(patch, frames, dirsets)):
            for iv, L in enumerate(dirs):
                for delta in deltas:
                    res = contains_bidisc(
                        DiscQuery(p=p, L=L, c1=c1v, c2=c2v, k=k, delta=float(delta)),
                        sampling, frame=fr)
                    if collect is not None:
                        collect(ip, iv, float(delta), res)
                    if not res.contained:
                        all_pass = False
                        if collect is None:
                            return False
        return all_pass

    entries = []
    failures = []

    def collect(ip, iv, delta, res):
        entries.append({"point_index": ip, "direction_index": iv, "delta": delta,
                        "contained": res.contained, "max_r": res.max_r})
        if not res.contained:
            failures.append((ip, iv, delta, res.witness))

    uniform = run(c1, c2, collect)

    best = None
    if lattice_factors is not None:
        combos = sorted(((fa, fb) for fa in lattice_factors for fb in lattice_factors),
                        key=lambda ab: (-ab[0] * ab[1], -ab[0]))
        for fa, fb in combos:
            if fa * c1 >= 1.0:
                continue
            if run(fa * c1, fb * c2, None):
                best = (fa * c1, fb * c2, float(deltas.max()))
                break
    return SweepReport(uniform=uniform, entries=tuple(entries),
                       failures=tuple(failures), best_constants=best)
