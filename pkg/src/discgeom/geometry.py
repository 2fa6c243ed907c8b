"""Boundary geometry: projection, frames, Levi form, contact order, curves.

Complex vectors in C^n double as real vectors in R^{2n}; the complex
structure J acts as multiplication by i.  The Hermitian inner product is
<u, v> = sum_j u_j conj(v_j), whose real part is the Euclidean pairing of the
underlying real vectors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .domains import Domain
from .errors import (
    CollarExitError,
    DegenerateFitError,
    DegenerateGradientError,
    GeometryError,
    NoSignChangeError,
)
from .fitting import loglog_fit
from .numdiff import complex_hessian, directional_derivative, real_gradient

__all__ = [
    "BoundaryPoint", "Frame", "Curve", "OrderEstimate",
    "project_to_boundary", "boundary_point_at", "frame_at", "levi_form",
    "contact_order", "integrate_tangential_curve", "random_boundary_points",
    "herm", "complexify", "realify",
]

_GRAD_FLOOR = 1e-8
_RESIDUAL_FACTOR = 1e-10


def herm(u, v) -> complex:
    """<u, v> = sum u_j conj(v_j)."""
    return complex(np.vdot(np.asarray(v, dtype=complex), np.asarray(u, dtype=complex)))


def complexify(g: np.ndarray) -> np.ndarray:
    """Real vector (x1, y1, ..., xn, yn) as a complex vector in C^n."""
    g = np.asarray(g, dtype=float)
    return g[0::2] + 1j * g[1::2]


def realify(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    out = np.empty(2 * v.size)
    out[0::2] = v.real
    out[1::2] = v.imag
    return out


@dataclass(frozen=True, eq=False)
class BoundaryPoint:
    """A validated point of {r = 0} with a nondegenerate gradient."""

    domain: Domain
    p: np.ndarray
    residual: float
    grad_norm: float

    def __post_init__(self):
        if self.grad_norm <= _GRAD_FLOOR:
            raise DegenerateGradientError(
                f"|grad r| = {self.grad_norm:.3e} at putative boundary point")
        if self.residual >= _RESIDUAL_FACTOR * max(1.0, self.grad_norm):
            raise GeometryError(
                f"residual |r| = {self.residual:.3e} too large for a boundary point")


@dataclass(frozen=True, eq=False)
class Frame:
    """Outward normal, complex normal, and holomorphic tangent basis at p."""

    N: np.ndarray          # real unit outward normal, as a vector in C^n
    nu: np.ndarray         # unit complex normal (parallel to conj Wirtinger gradient)
    L: np.ndarray          # (n-1, n) Hermitian-orthonormal tangent basis rows

    @property
    def JN(self) -> np.ndarray:
        return 1j * self.N


@dataclass(frozen=True, eq=False)
class Curve:
    """Sampled arclength-parameterized curve (t_k, z_k)."""

    samples: tuple

    def __post_init__(self):
        for (t0, z0), (t1, z1) in zip(self.samples, self.samples[1:]):
            dz = float(np.linalg.norm(z1 - z0))
            if dz > 1.5 * (t1 - t0) + 1e-15:
                raise GeometryError("curve samples violate the near-unit-speed bound")

    def point_at_index(self, k: int):
        return self.samples[k]


@dataclass(frozen=True)
class OrderEstimate:
    """Estimated order of vanishing along a line; lower_bound=True means
    the true order is at least `cap` (values fell to noise or the slope
    exceeded the cap)."""

    order: float
    r_squared: float
    lower_bound: bool
    cap: float
    samples_used: int


# --- location ----------------------------------------------------------------


def project_to_boundary(d: Domain, seed, direction, t_max: float | None = None,
                        scan_points: int = 256) -> BoundaryPoint:
    """Root of t -> r(seed + t*direction) by scan + bisection + Newton polish.

    The forward ray is scanned first; when it never changes sign the
    backward ray is tried as well, so seeds sitting marginally on the far
    side of the boundary (midpoint probes of near-boundary curves) still
    project.
    """
    seed = np.asarray(seed, dtype=complex)
    direction = np.asarray(direction, dtype=complex)
    norm = float(np.linalg.norm(direction))
    if norm == 0.0:
        raise GeometryError("zero search direction")
    direction = direction / norm
    if t_max is None:
        t_max = d.diameter_hint

    def scan(dirvec):
        def g(t):
            return d.value(seed + t * dirvec)

        ts = np.linspace(0.0, t_max, scan_points + 1)
        vals = [g(t) for t in ts]
        for k in range(scan_points):
            a, b = vals[k], vals[k + 1]
            if a == 0.0:
                return (ts[k], ts[k])
            if a * b < 0.0:
                return (ts[k], ts[k + 1])
        if vals[-1] == 0.0:
            return (ts[-1], ts[-1])
        return None

    bracket = scan(direction)
    if bracket is None:
        bracket = scan(-direction)
        if bracket is not None:
            direction = -direction
    if bracket is None:
        raise NoSignChangeError(
            f"r does not change sign along the ray (t in [0, {t_max:g}])")

    def g(t):
        return d.value(seed + t * direction)

    lo, hi = bracket
    flo = g(lo)
    for _ in range(60):
        if hi - lo <= 0.0:
            break
        mid = 0.5 * (lo + hi)
        fm = g(mid)
        if fm == 0.0:
            lo = hi = mid
            break
        if flo * fm < 0.0:
            hi = mid
        else:
            lo, flo = mid, fm

    dreal = realify(direction)
    t = 0.5 * (lo + hi)
    for _ in range(6):
        z = seed + t * direction
        val = d.value(z)
        slope = directional_derivative(d.func, z, dreal)
        if slope == 0.0:
            break
        t_new = t - val / slope
        if not (lo - (hi - lo) <= t_new <= hi + (hi - lo)):
            break
        t = t_new
        if abs(val) <= 1e-14 * max(1.0, abs(slope)):
            break

    p = seed + t * direction
    return boundary_point_at(d, p)


def boundary_point_at(d: Domain, p) -> BoundaryPoint:
    """Wrap a known boundary point, validating residual and gradient."""
    p = np.asarray(p, dtype=complex)
    residual = abs(d.value(p))
    grad = real_gradient(d.func, p)
    return BoundaryPoint(domain=d, p=p, residual=residual,
                         grad_norm=float(np.linalg.norm(grad)))


def random_boundary_points(d: Domain, count: int, rng: np.random.Generator,
                           max_tries: int = 200):
    """Boundary points hit by random rays from the interior witness."""
    if not d.witness:
        raise GeometryError(f"domain {d.name} has no interior witness to shoot from")
    seed = np.asarray(d.witness, dtype=complex)
    out = []
    tries = 0
    while len(out) < count:
        tries += 1
        if tries > max_tries * count:
            raise GeometryError(f"boundary sampling stalled on {d.name}")
        direction = complexify(rng.normal(size=2 * d.n))
        try:
            bp = project_to_boundary(d, seed, direction)
        except (NoSignChangeError, DegenerateGradientError):
            continue
        if d.in_box(bp.p):
            out.append(bp)
    return out


# --- frames ------------------------------------------------------------------


def frame_at(d: Domain, bp: BoundaryPoint) -> Frame:
    """Deterministic orthonormal frame: N, nu, and a tangent basis.

    nu is the normalized vector of conjugated Wirtinger derivatives; for a
    real-valued defining function it coincides with the outward normal N
    read as a complex vector.  The tangent basis comes from Gram-Schmidt over
    the standard basis, candidates ordered by decreasing Hermitian distance
    from nu, skipping near-parallel candidates.
    """
    n = d.n
    grad = real_gradient(d.func, bp.p)
    gnorm = float(np.linalg.norm(grad))
    if gnorm <= _GRAD_FLOOR:
        raise DegenerateGradientError(f"|grad r| = {gnorm:.3e}")
    N = complexify(grad) / gnorm
    dz = 0.5 * (grad[0::2] - 1j * grad[1::2])
    nu = np.conj(dz)
    nu = nu / np.linalg.norm(nu)

    order = sorted(range(n), key=lambda j: (abs(nu[j]), j))
    basis = []
    for j in order:
        v = np.zeros(n, dtype=complex)
        v[j] = 1.0
        v = v - herm(v, nu) * nu
        for b in basis:
            v = v - herm(v, b) * b
        vn = float(np.linalg.norm(v))
        if vn < 1e-6:
            continue
        basis.append(v / vn)
        if len(basis) == n - 1:
            break
    if len(basis) != n - 1:
        raise GeometryError("could not complete a tangent basis")

    # outward sanity check: r must increase along +N just off the point
    t = 1e-6 * max(1.0, float(np.linalg.norm(bp.p)))
    if d.value(bp.p + t * N) <= 0.0:
        raise GeometryError("gradient direction does not point out of {r < 0}")
    return Frame(N=N, nu=nu, L=np.array(basis))


def levi_form(d: Domain, bp: BoundaryPoint, frame: Frame | None = None):
    """Levi form on the holomorphic tangent space and its smallest eigenvalue."""
    if frame is None:
        frame = frame_at(d, bp)
    H = complex_hessian(d.func, bp.p)
    M = frame.L @ H @ frame.L.conj().T
    herm_part = 0.5 * (M + M.conj().T)
    min_eig = float(np.linalg.eigvalsh(herm_part)[0])
    return M, min_eig


# --- contact order -------------------------------------------------------------


def contact_order(d: Domain, bp: BoundaryPoint, L, radii=None, phases: int = 16,
                  cap: float = 24.0) -> OrderEstimate:
    """Order of vanishing of r along the complex line p + zeta*L.

    Fits the slope of log max_phase |r| against log |zeta|.  When every
    sample sits at double-precision noise (or the slope tops the cap) the
    estimate is reported as a lower bound at the cap.
    """
    L = np.asarray(L, dtype=complex)
    if radii is None:
        # large enough that an order-12 vanishing still clears the noise floor
        radii = np.geomspace(1e-3, 0.3, 14)
    radii = np.asarray(radii, dtype=float)
    angles = 2.0 * np.pi * np.arange(phases) / phases
    zeta = radii[:, None] * np.exp(1j * angles)[None, :]
    pts = bp.p[None, None, :] + zeta[:, :, None] * L[None, None, :]
    vals = d.value_batch(pts.reshape(-1, d.n)).reshape(len(radii), phases)
    with np.errstate(all="ignore"):
        per_radius = np.nanmax(np.abs(vals), axis=1)

    finite = np.isfinite(per_radius)
    if finite.sum() < 4:
        raise DegenerateFitError(
            f"only {int(finite.sum())} evaluable radii in the contact-order grid")
    noise = 1e-13 * max(1.0, bp.grad_norm)
    usable = finite & (per_radius > noise)
    if usable.sum() < 4:
        # everything at double-precision noise: the vanishing order exceeds
        # what the grid can resolve
        return OrderEstimate(order=cap, r_squared=float("nan"), lower_bound=True,
                             cap=cap, samples_used=int(usable.sum()))
    fit = loglog_fit(radii[usable], per_radius[usable])
    if fit.slope > cap:
        return OrderEstimate(order=cap, r_squared=fit.r_squared, lower_bound=True,
                             cap=cap, samples_used=fit.count)
    return OrderEstimate(order=fit.slope, r_squared=fit.r_squared,
                         lower_bound=False, cap=cap, samples_used=fit.count)


# --- tangential curves -----------------------------------------------------------


def integrate_tangential_curve(d: Domain, start, steering, length: float,
                               step: float, delta0: float = 0.25) -> Curve:
    """Explicit-midpoint flow of the unit tangential field chosen by `steering`.

    steering: ("tangent_index", i) follows the frame's i-th tangent vector
    with phase continuity; ("ambient", v) re-projects the fixed ambient
    vector v onto the holomorphic tangent space at the projected boundary
    point each step.  The curve must stay within distance delta0/5 of the
    boundary or a :class:`CollarExitError` is raised.
    """
    if step > length / 10.0 + 1e-15:
        raise GeometryError("step must be at most length/10")
    z = np.asarray(start, dtype=complex)
    mode, payload = steering
    if mode == "ambient":
        payload = np.asarray(payload, dtype=complex)
    elif mode != "tangent_index":
        raise GeometryError(f"unknown steering rule {mode!r}")

    def field(at, prev):
        grad = real_gradient(d.func, at)
        gnorm = float(np.linalg.norm(grad))
        if gnorm <= _GRAD_FLOOR:
            raise DegenerateGradientError("gradient degenerate along curve")
        outward = complexify(grad) / gnorm
        bp = project_to_boundary(d, at, outward, t_max=max(2.0 * delta0, 1e-3))
        dist = float(np.linalg.norm(bp.p - at))
        if dist > delta0 / 5.0:
            raise CollarExitError(
                f"distance to boundary {dist:.3e} exceeds collar {delta0 / 5.0:.3e}")
        fr = frame_at(d, bp)
        if mode == "tangent_index":
            v = fr.L[payload]
            if prev is not None:
                c = herm(v, prev)
                if abs(c) > 1e-12:
                    v = v * (np.conj(c) / abs(c))
        else:
            v = payload - herm(payload, fr.nu) * fr.nu
            vn = float(np.linalg.norm(v))
            if vn < 1e-8:
                raise GeometryError("steering vector is normal to the boundary here")
            v = v / vn
        return v

    samples = [(0.0, z.copy())]
    t = 0.0
    prev = None
    steps = int(round(length / step))
    for _ in range(steps):
        v1 = field(z, prev)
        v2 = field(z + 0.5 * step * v1, v1)
        z = z + step * v2
        t += step
        prev = v2
        samples.append((t, z.copy()))
    return Curve(samples=tuple(samples))
