"""Domain catalog: defining functions, guards, witnesses, reference points.

Every entry represents an open set Omega = {r < 0} in C^n through an
evaluable defining function.  DSL-backed entries parse an expression once at
construction; the stiff profiles (worm, FLZ examples, flat-exponential
families) use built-in smooth kernels so dual numbers propagate exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import defexpr
from .cnum import Cx, unit_circle
from .errors import (
    BadParameterError,
    EvalDomainError,
    GuardError,
    UnknownDomainError,
)
from .kernels import SmoothKernel, flat_exp, flz1_chi, flz2_psi, worm_phi
from . import scalars as sc

__all__ = [
    "Domain", "Guard", "ReferencePoint", "catalog_get", "reference_points",
    "catalog_families", "load_domain_file", "parse_domain_spec",
]

_SQRT3 = math.sqrt(3.0)


@dataclass(frozen=True)
class Guard:
    """An excluded locus of the defining function (e.g. "z2 != 0")."""

    description: str
    index: int  # 1-based coordinate that must stay away from 0

    def ok(self, z) -> bool:
        return z[self.index - 1] != 0

    def batch_ok(self, pts: np.ndarray) -> np.ndarray:
        return pts[:, self.index - 1] != 0


@dataclass(frozen=True)
class ReferencePoint:
    point: tuple
    annotation: str
    kind: str  # strongly_pseudoconvex | weakly_pseudoconvex | infinite_type
    direction: tuple | None = None
    expected_index: float | None = None  # None with kind=infinite_type: unbounded


@dataclass(frozen=True, eq=False)
class Domain:
    """A defining function with its evaluation context.

    `box`, when set, bounds the coordinate moduli within which r is a valid
    local defining function; analyses must not trust r outside it.
    """

    name: str
    n: int
    func: Callable
    params: dict = field(default_factory=dict)
    guards: tuple = ()
    box: float | None = None
    witness: tuple = ()
    diameter_hint: float = 4.0
    sample_bounds: tuple = ()  # ((lo, hi) per real coordinate, len 2n)
    reference: tuple = ()
    expr_text: str | None = None

    # -- evaluation --------------------------------------------------------

    def check_guards(self, z):
        for g in self.guards:
            if not g.ok(z):
                raise GuardError(f"{self.name}: point violates guard '{g.description}'")

    def value(self, z) -> float:
        """r(z) as a float; raises on guard violations and domain errors."""
        if len(z) != self.n:
            raise EvalDomainError(f"point has {len(z)} coordinates, expected {self.n}")
        self.check_guards(z)
        zs = [Cx.from_complex(c) for c in z]
        return float(self.func(zs))

    def value_batch(self, pts: np.ndarray) -> np.ndarray:
        """r on rows of an (S, n) complex array; invalid samples become nan."""
        pts = np.asarray(pts, dtype=complex)
        zs = [Cx(pts[:, j].real.copy(), pts[:, j].imag.copy()) for j in range(self.n)]
        with np.errstate(all="ignore"):
            vals = np.asarray(self.func(zs), dtype=float)
        bad = np.zeros(pts.shape[0], dtype=bool)
        for g in self.guards:
            bad |= ~g.batch_ok(pts)
        if bad.any():
            vals = vals.copy()
            vals[bad] = np.nan
        return vals

    def in_box(self, z) -> bool:
        if self.box is None:
            return True
        return max(abs(complex(c)) for c in z) <= self.box

    def batch_in_box(self, pts: np.ndarray) -> np.ndarray:
        if self.box is None:
            return np.ones(pts.shape[0], dtype=bool)
        return np.max(np.abs(pts), axis=1) <= self.box

    def is_interior(self, z) -> bool:
        return self.in_box(z) and self.value(z) < 0.0

    # -- sampling ------------------------------------------------------------

    def sample_interior(self, count: int, rng: np.random.Generator) -> np.ndarray:
        """Rejection-sample `count` interior points (respecting box and guards)."""
        bounds = np.asarray(self.sample_bounds, dtype=float)
        out = []
        attempts = 0
        while len(out) < count:
            attempts += 1
            if attempts > 2000:
                raise RuntimeError(f"interior sampling stalled for {self.name}")
            batch = rng.uniform(bounds[:, 0], bounds[:, 1],
                                size=(max(4 * count, 64), bounds.shape[0]))
            pts = batch[:, 0::2] + 1j * batch[:, 1::2]
            vals = self.value_batch(pts)
            good = np.isfinite(vals) & (vals < 0) & self.batch_in_box(pts)
            out.extend(pts[good])
        return np.array(out[:count])


def reference_points(d: Domain):
    """Named special boundary points with annotations."""
    return list(d.reference)


# --- DSL-backed defining functions -------------------------------------------


class _DslFunc:
    """Evaluable wrapping a parsed expression; strict except in array mode."""

    def __init__(self, ast: defexpr.ExprAst, params: dict):
        self.ast = ast
        self.params = dict(params)

    def __call__(self, zs):
        strict = np.ndim(zs[0].re) == 0
        return defexpr.eval_node(self.ast.root, zs, self.params, strict=strict)


# --- catalog builders ---------------------------------------------------------


def _refpoint(pt, ann, kind, direction=None, expected=None):
    return ReferencePoint(tuple(pt), ann, kind, None if direction is None
                          else tuple(direction), expected)


def _square_bounds(half, n):
    return tuple((-half, half) for _ in range(2 * n))


def _build_ball(params):
    ast = defexpr.parse("abs2(z1) + abs2(z2) - 1", 2)
    refs = (
        _refpoint((1 + 0j, 0j), "strongly pseudoconvex; tangential disc index 2",
                  "strongly_pseudoconvex", (0j, 1 + 0j), 2.0),
        _refpoint((0j, 1 + 0j), "strongly pseudoconvex; tangential disc index 2",
                  "strongly_pseudoconvex", (1 + 0j, 0j), 2.0),
    )
    return Domain(name="ball", n=2, func=_DslFunc(ast, {}),
                  witness=(0j, 0j), diameter_hint=2.5,
                  sample_bounds=_square_bounds(1.05, 2), reference=refs,
                  expr_text=ast.pretty())


def _build_egg(params):
    m = params.get("m")
    if m is None or int(m) != m or m < 1:
        raise BadParameterError("egg requires an integer parameter m >= 1")
    m = int(m)
    ast = defexpr.parse(f"abs2(z1) + abs2(z2)^{m} - 1", 2)
    refs = (
        _refpoint((1 + 0j, 0j),
                  f"Levi-degenerate pole for m>=2; disc index 2m={2 * m} along z2",
                  "weakly_pseudoconvex" if m >= 2 else "strongly_pseudoconvex",
                  (0j, 1 + 0j), float(2 * m)),
        _refpoint((0j, 1 + 0j),
                  "strongly pseudoconvex; disc index 2 along z1",
                  "strongly_pseudoconvex", (1 + 0j, 0j), 2.0),
    )
    return Domain(name="egg", n=2, func=_DslFunc(ast, {}), params={"m": m},
                  witness=(0j, 0j), diameter_hint=2.5,
                  sample_bounds=_square_bounds(1.05, 2), reference=refs,
                  expr_text=ast.pretty())


class _WormFunc:
    def __init__(self, phi: SmoothKernel):
        self.phi = phi

    def __call__(self, zs):
        z1, z2 = zs
        theta = sc.log(z2.abs2())
        w = z1 + unit_circle(theta)
        return w.abs2() - 1.0 + self.phi(theta)


def worm_annulus_point(beta: float, theta: float, phase: float = 0.0):
    """The annulus point (0, |z2| e^{i phase}) with log|z2|^2 = theta."""
    half = beta - math.pi / 2.0
    if abs(theta) > half:
        raise BadParameterError(f"theta must lie in [{-half:g}, {half:g}]")
    return (0j, math.exp(theta / 2.0) * complex(math.cos(phase), math.sin(phase)))


def worm_offcenter_point(beta: float, theta: float, alpha: float, phase: float = 0.0):
    """Boundary point (-e^{i theta} + e^{i alpha}, z2) away from the annulus.

    Valid (and strongly pseudoconvex) whenever alpha != theta mod 2 pi and
    theta sits in the flat zone of phi.
    """
    _, z2 = worm_annulus_point(beta, theta, phase)
    z1 = -complex(math.cos(theta), math.sin(theta)) + complex(math.cos(alpha), math.sin(alpha))
    return (z1, z2)


def _build_worm(params):
    beta = params.get("beta")
    if beta is None or not beta > math.pi / 2:
        raise BadParameterError("worm requires beta > pi/2")
    beta = float(beta)
    phi = worm_phi(beta)
    half = beta - math.pi / 2.0
    annulus = [worm_annulus_point(beta, t * half, ph)
               for t in (0.0, 0.45, -0.45, 0.8, -0.8)
               for ph in (0.0, 2.1)]
    strong = [worm_offcenter_point(beta, t * half, t * half + a)
              for t in (0.0, 0.4)
              for a in (0.9 * math.pi, 0.7 * math.pi, 1.2 * math.pi,
                        0.5 * math.pi, 1.5 * math.pi)]
    refs = tuple(
        _refpoint(p, "on the annulus of Levi-degenerate points; tangential disc "
                     "index exceeds every finite cap", "infinite_type",
                  None, None)
        for p in annulus
    ) + tuple(
        _refpoint(p, "strongly pseudoconvex (z1 != 0)", "strongly_pseudoconvex")
        for p in strong
    )
    hi2 = math.exp(0.5 * (half + 0.5)) + 0.1
    return Domain(name="worm", n=2, func=_WormFunc(phi),
                  params={"beta": beta},
                  guards=(Guard("z2 != 0", 2),),
                  witness=(-1 + 0j, 1 + 0j), diameter_hint=4.0,
                  sample_bounds=((-2.1, 0.4), (-1.9, 1.9),
                                 (-hi2, hi2), (-hi2, hi2)),
                  reference=refs)


class _Flz1Func:
    def __init__(self, chi: SmoothKernel):
        self.chi = chi

    def __call__(self, zs):
        z1, z2 = zs
        w = z1 - _SQRT3
        return w.abs2() + self.chi(z2.abs2()) - 4.0


def _build_flz1(params):
    opts = {"alpha": 0.5, "eps": 5e-5, "kappa": 0.1, "tau": 0.05}
    opts.update(params)
    chi = flz1_chi(**opts)
    refs = (
        _refpoint((0j, 0.5 + 0j), "on the flat boundary cylinder (|z1-sqrt3|^2=3, "
                  "|z2|<=1); disc index exceeds every finite cap", "infinite_type"),
        _refpoint((0j, 0.8j), "on the flat boundary cylinder", "infinite_type"),
        _refpoint((0j, 0j), "flat-cylinder point with z2 at the axis", "infinite_type"),
    )
    return Domain(name="flz1", n=2, func=_Flz1Func(chi), params=dict(opts),
                  witness=(0.2 + 0j, 0j), diameter_hint=5.0,
                  sample_bounds=((_SQRT3 - 2.1, _SQRT3 + 2.1), (-2.1, 2.1),
                                 (-2.1, 2.1), (-2.1, 2.1)),
                  reference=refs)


class _Flz2Func:
    def __init__(self, psi: SmoothKernel, kappa: float):
        self.psi = psi
        self.kappa = kappa

    def __call__(self, zs):
        z1, z2 = zs
        return self.psi(z1.abs2()) + self.psi(z2.abs2()) - 2.0 + self.kappa


def _build_flz2(params):
    opts = {"alpha": 0.5, "kappa": 0.1}
    opts.update(params)
    psi = flz2_psi(**opts)
    func = _Flz2Func(psi, opts["kappa"])
    margin = 1.0 - opts["kappa"]
    refs = (
        _refpoint((1 + 0j, 0j), "on the flat piece |z1|=1, |z2|<=1-kappa; disc "
                  "index exceeds every finite cap along z2", "infinite_type"),
        _refpoint((1 + 0j, 0.5 * margin + 0j), "on the flat piece |z1|=1",
                  "infinite_type"),
        _refpoint((complex(math.cos(0.7), math.sin(0.7)), 0.3j),
                  "on the flat piece |z1|=1", "infinite_type"),
    )
    return Domain(name="flz2", n=2, func=func, params=dict(opts),
                  witness=(0j, 0j), diameter_hint=2.5,
                  sample_bounds=_square_bounds(1.05, 2), reference=refs)


class _ExpFlatFunc:
    def __init__(self, kernels_by_slot: dict, extra=None):
        self.kernels = kernels_by_slot  # 0-based coordinate -> kernel in |z|^2
        self.extra = extra

    def __call__(self, zs):
        total = 0.0
        for j, k in self.kernels.items():
            total = total + k(zs[j].abs2())
        if self.extra is not None:
            total = total + self.extra(zs)
        return total


def _build_expflat(params):
    e2 = flat_exp(2.0)
    func = _ExpFlatFunc({1: e2}, extra=lambda zs: zs[0].re)
    refs = (
        _refpoint((0j, 0j), "exponentially flat boundary point; disc index "
                  "exceeds every finite cap along z2", "infinite_type",
                  (0j, 1 + 0j), None),
    )
    return Domain(name="expflat", n=2, func=func, box=1.0,
                  witness=(-0.5 + 0j, 0j), diameter_hint=2.0,
                  sample_bounds=((-1.0, 0.0), (-1.0, 1.0), (-1.0, 1.0), (-1.0, 1.0)),
                  reference=refs)


def _build_double_expflat(params):
    a1 = float(params.get("alpha1", 2.0))
    a2 = float(params.get("alpha2", 2.0))
    if a1 <= 0 or a2 <= 0:
        raise BadParameterError("double_expflat requires alpha1, alpha2 > 0")
    func = _ExpFlatFunc({0: flat_exp(a1), 1: flat_exp(a2)},
                        extra=lambda zs: -math.exp(-1.0))
    refs = (
        _refpoint((0j, 1 + 0j), "on the circle {z1=0, |z2|=1}; disc index exceeds "
                  "every finite cap along z1", "infinite_type", (1 + 0j, 0j), None),
        _refpoint((0j, -1 + 0j), "on the circle {z1=0, |z2|=1}", "infinite_type",
                  (1 + 0j, 0j), None),
    )
    return Domain(name="double_expflat", n=2, func=func,
                  params={"alpha1": a1, "alpha2": a2},
                  witness=(0j, 0j), diameter_hint=2.5,
                  sample_bounds=_square_bounds(1.05, 2), reference=refs)


def _build_dangelo(params):
    ast = defexpr.parse("Re(z1) + abs2(z2^2 - z3^3)", 3)
    zeta = 0.1
    curve_pt = (0j, complex(zeta) ** 3, complex(zeta) ** 2)
    refs = (
        _refpoint((0j, 0j, 0j), "infinite D'Angelo type, finite regular type; "
                  "disc index 6 along z3", "infinite_type", (0j, 0j, 1 + 0j), 6.0),
        _refpoint(curve_pt, "on the curve (0, t^3, t^2); disc index exceeds every "
                  "finite cap along the chart direction once w2 = z2^2 - z3^3 "
                  "straightens the curve", "infinite_type", None, None),
    )
    return Domain(name="dangelo", n=3, func=_DslFunc(ast, {}), box=1.0,
                  witness=(-0.5 + 0j, 0j, 0j), diameter_hint=2.0,
                  sample_bounds=((-1.0, 0.0),) + ((-1.0, 1.0),) * 5,
                  reference=refs, expr_text=ast.pretty())


class _C3MixedFunc:
    def __init__(self):
        self.e2 = flat_exp(2.0)

    def __call__(self, zs):
        return zs[0].re + self.e2(zs[1].abs2()) + zs[2].abs2() ** 3


def _build_c3_mixed(params):
    refs = (
        _refpoint((0j, 0j, 0j), "disc index exceeds every finite cap along z2 "
                  "but equals 6 along z3; mixed directions fail beyond index 6",
                  "infinite_type", (0j, 1 + 0j, 0j), None),
    )
    return Domain(name="c3_mixed", n=3, func=_C3MixedFunc(), box=1.0,
                  witness=(-0.5 + 0j, 0j, 0j), diameter_hint=2.0,
                  sample_bounds=((-1.0, 0.0),) + ((-1.0, 1.0),) * 5,
                  reference=refs)


def _build_dsl(params):
    opts = dict(params)
    expr = opts.pop("expr", None)
    if not expr:
        raise BadParameterError("dsl requires an 'expr' string")
    n = int(opts.pop("n", 2))
    box = opts.pop("box", None)
    witness = opts.pop("witness", None)
    guards = opts.pop("guards", ())
    ast = defexpr.parse(expr, n)
    missing = ast.parameters() - opts.keys()
    if missing:
        raise BadParameterError("missing parameters: " + ", ".join(sorted(missing)))
    numeric = {k: float(v) for k, v in opts.items()}
    half = float(box) + 0.05 if box is not None else 2.0
    return Domain(name="dsl", n=n, func=_DslFunc(ast, numeric), params=numeric,
                  guards=tuple(guards),
                  box=None if box is None else float(box),
                  witness=tuple(witness) if witness else (),
                  diameter_hint=2.0 * half,
                  sample_bounds=_square_bounds(half, n),
                  expr_text=ast.pretty())


_BUILDERS = {
    "ball": _build_ball,
    "egg": _build_egg,
    "worm": _build_worm,
    "flz1": _build_flz1,
    "flz2": _build_flz2,
    "expflat": _build_expflat,
    "double_expflat": _build_double_expflat,
    "dangelo": _build_dangelo,
    "c3_mixed": _build_c3_mixed,
    "dsl": _build_dsl,
}


def catalog_families():
    """Family names with their parameter constraints, for listings."""
    return {
        "ball": {"params": {}, "note": "unit ball |z1|^2+|z2|^2<1"},
        "egg": {"params": {"m": "integer >= 1"},
                "note": "|z1|^2+|z2|^(2m)<1; Levi-degenerate pole (1,0) of index 2m"},
        "worm": {"params": {"beta": "> pi/2"},
                 "note": "worm domain; annulus of infinite-type points"},
        "flz1": {"params": {"alpha": "(0,1)", "eps": "small", "kappa": "small",
                            "tau": "< kappa"},
                 "note": "flat cylinder piece, exponentially flat profile"},
        "flz2": {"params": {"alpha": "(0,1)", "kappa": "small"},
                 "note": "two flat boundary pieces P1, P2"},
        "expflat": {"params": {},
                    "note": "Re(z1)+exp(-1/|z2|^2)<0 near 0 (local)"},
        "double_expflat": {"params": {"alpha1": "> 0", "alpha2": "> 0"},
                           "note": "exp(-1/|z1|^a1)+exp(-1/|z2|^a2)<1/e"},
        "dangelo": {"params": {},
                    "note": "Re(z1)+|z2^2-z3^3|^2<0 near 0 (local); origin is of "
                            "infinite type but finite regular type"},
        "c3_mixed": {"params": {},
                     "note": "Re(z1)+exp(-1/|z2|^2)+|z3|^6<0 near 0 (local); "
                             "direction-dependent disc index"},
        "dsl": {"params": {"expr": "string", "n": "dimension", "box": "optional",
                           "witness": "optional"},
                "note": "user-supplied defining function"},
    }


def catalog_get(name: str, params: dict | None = None) -> Domain:
    """Build a catalog domain; raises on unknown names or bad parameters."""
    try:
        builder = _BUILDERS[name]
    except KeyError:
        raise UnknownDomainError(
            f"unknown domain {name!r}; families: {', '.join(sorted(_BUILDERS))}"
        ) from None
    return builder(dict(params or {}))


# --- domain spec files ---------------------------------------------------------
#
# Flat text, one `key = value` pair per line, `#` comments.  Keys: name, n,
# expr, box, witness ("re,im;re,im;..."), guard (repeatable, "zJ != 0"),
# params.<name>.  See docs/domain-files.md for examples of every family.


def parse_domain_spec(text: str) -> Domain:
    name = None
    params: dict = {}
    guards = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise BadParameterError(f"line {lineno}: expected key = value")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key == "name":
            name = value
        elif key == "n":
            params["n"] = int(value)
        elif key == "expr":
            params["expr"] = value
        elif key == "box":
            params["box"] = float(value)
        elif key == "witness":
            params["witness"] = _parse_point(value)
        elif key == "guard":
            guards.append(_parse_guard(value, lineno))
        elif key.startswith("params."):
            params[key[len("params."):]] = float(value)
        else:
            raise BadParameterError(f"line {lineno}: unknown key {key!r}")
    if name is None:
        raise BadParameterError("domain spec is missing 'name'")
    if guards:
        params["guards"] = tuple(guards)
    return catalog_get(name, params)


def load_domain_file(path) -> Domain:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_domain_spec(fh.read())


def _parse_point(text: str) -> tuple:
    coords = []
    for part in text.split(";"):
        re_s, _, im_s = part.partition(",")
        coords.append(complex(float(re_s), float(im_s or "0")))
    return tuple(coords)


def _parse_guard(text: str, lineno: int) -> Guard:
    m = text.replace(" ", "")
    if m.startswith("z") and m.endswith("!=0"):
        idx = int(m[1:-3])
        return Guard(f"z{idx} != 0", idx)
    raise BadParameterError(f"line {lineno}: unsupported guard {text!r}")
