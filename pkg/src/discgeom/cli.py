"""Command-line front end.

Commands: list-domains, frame, disc, gain, sweep, verify.  Every run emits a
single JSON report (deterministic bytes for identical configurations,
including --seed and --jobs) plus an optional two-column CSV for plotting.
Exit codes: 0 success, 1 analysis failure, 2 configuration error.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__, report
from .disc import (
    DiscQuery,
    contains_bidisc,
    default_delta_grid,
    estimate_index,
    radius_profile,
    uniform_sweep,
)
from .domains import catalog_families, catalog_get, load_domain_file
from .errors import (
    BadParameterError,
    ConfigError,
    DiscgeomError,
    ExprError,
    UnknownDomainError,
)
from .geometry import (
    boundary_point_at,
    frame_at,
    levi_form,
    project_to_boundary,
    random_boundary_points,
)
from .hoelder import derivative_growth, make_halfspace_power, tangential_gain
from .numdiff import real_gradient


def _parse_point(text: str) -> tuple:
    try:
        coords = []
        for part in text.split(";"):
            re_s, _, im_s = part.partition(",")
            coords.append(complex(float(re_s), float(im_s or "0")))
        return tuple(coords)
    except ValueError as exc:
        raise ConfigError(f"bad point spec {text!r}: {exc}") from None


def _parse_params(items) -> dict:
    out = {}
    for item in items or ():
        key, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"--params expects key=value, got {item!r}")
        try:
            out[key] = float(value)
        except ValueError:
            out[key] = value
    return out


def _load_domain(args):
    if args.domain_file:
        return load_domain_file(args.domain_file)
    if not args.domain:
        raise ConfigError("provide --domain or --domain-file")
    return catalog_get(args.domain, _parse_params(args.params))


def _resolve_boundary_point(d, args):
    pt = np.asarray(_parse_point(args.point), dtype=complex)
    if len(pt) != d.n:
        raise ConfigError(f"point has {len(pt)} coordinates, domain needs {d.n}")
    if args.direction:
        direction = np.asarray(_parse_point(args.direction), dtype=complex)
        return project_to_boundary(d, pt, direction)
    residual = abs(d.value(pt))
    if residual < 1e-10:
        return boundary_point_at(d, pt)
    grad = real_gradient(d.func, pt)
    return project_to_boundary(d, pt, grad[0::2] + 1j * grad[1::2])


def _base_config(args, command):
    cfg = {"command": command, "seed": args.seed, "jobs": args.jobs}
    for key in ("domain", "domain_file", "params", "point", "direction", "k",
                "c1", "c2", "alpha", "delta_min", "delta_max", "delta_steps",
                "patch", "suite", "lattice"):
        if hasattr(args, key):
            cfg[key] = getattr(args, key)
    return cfg


def _emit(args, payload):
    payload = {"schema_version": report.SCHEMA_VERSION, "tool": "discgeom",
               "version": __version__, **payload}
    if args.out:
        report.write_report(args.out, payload)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(report.dumps(payload))


def _delta_grid(args):
    return default_delta_grid(args.delta_min, args.delta_max, args.delta_steps)


def _pmap(fn, items, jobs):
    if jobs <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


# --- commands ---------------------------------------------------------------


def _cmd_list_domains(args):
    fams = catalog_families()
    listing = {}
    for name, info in fams.items():
        entry = dict(info)
        if name not in ("dsl",):
            d = catalog_get(name, {"m": 2} if name == "egg"
                            else {"beta": 2.0} if name == "worm" else {})
            entry["reference_points"] = [
                {"point": list(r.point), "annotation": r.annotation, "kind": r.kind,
                 "direction": None if r.direction is None else list(r.direction),
                 "expected_index": r.expected_index}
                for r in d.reference]
        listing[name] = entry
    _emit(args, {"config": _base_config(args, "list-domains"),
                 "property": "domain catalog",
                 "results": listing, "diagnostics": []})
    return 0


def _cmd_frame(args):
    d = _load_domain(args)
    bp = _resolve_boundary_point(d, args)
    fr = frame_at(d, bp)
    levi, min_eig = levi_form(d, bp, fr)
    results = {
        "point": list(bp.p),
        "residual": bp.residual,
        "grad_norm": bp.grad_norm,
        "normal": list(fr.N),
        "complex_normal": list(fr.nu),
        "tangent_basis": [list(row) for row in fr.L],
        "levi_matrix": [list(row) for row in levi],
        "levi_min_eigenvalue": min_eig,
    }
    _emit(args, {"config": _base_config(args, "frame"),
                 "property": "boundary frame and Levi spectrum",
                 "results": results, "diagnostics": []})
    return 0


def _cmd_disc(args):
    d = _load_domain(args)
    bp = _resolve_boundary_point(d, args)
    fr = frame_at(d, bp)
    if args.tangent:
        from .geometry import herm

        L = np.asarray(_parse_point(args.tangent), dtype=complex)
        L = L - herm(L, fr.nu) * fr.nu
        L = L / np.linalg.norm(L)
    else:
        L = fr.L[0]
    deltas = _delta_grid(args)
    containment = []
    for delta in deltas:
        res = contains_bidisc(DiscQuery(p=bp, L=L, c1=args.c1, c2=args.c2,
                                        k=args.k, delta=float(delta)), frame=fr)
        containment.append({"delta": float(delta), "contained": res.contained,
                            "max_r": res.max_r,
                            "witness": None if res.witness is None else {
                                "point": list(res.witness.point),
                                "w1": res.witness.w1, "w2": res.witness.w2,
                                "r_value": res.witness.r_value,
                                "kind": res.witness.kind}})
    prof = radius_profile(d, bp, L, c1=args.c1, deltas=deltas)
    est = estimate_index(prof, k_cap=args.k_cap)
    results = {
        "point": list(bp.p),
        "tangent": list(L),
        "containment": containment,
        "profile": {"deltas": list(prof.deltas), "rhos": list(prof.rhos),
                    "c1": prof.c1, "failures": [list(f) for f in prof.failures]},
        "index_estimate": {"slope": est.slope, "k_hat": est.k_hat,
                           "r_squared": est.r_squared, "verdict": est.verdict,
                           "k_cap": est.k_cap},
    }
    _emit(args, {"config": _base_config(args, "disc"),
                 "property": "embedded-bidisc (disc property) analysis",
                 "results": results, "diagnostics": []})
    if args.csv:
        report.write_csv(args.csv, ["delta", "rho"],
                         list(zip(prof.deltas, prof.rhos)))
    return 0


def _cmd_gain(args):
    d = _load_domain(args)
    bp = _resolve_boundary_point(d, args)
    fr = frame_at(d, bp)
    f = make_halfspace_power(d, bp, args.alpha,
                             rng=np.random.default_rng(args.seed))
    direction = None
    if args.tangent:
        direction = np.asarray(_parse_point(args.tangent), dtype=complex)
    rep = tangential_gain(d, f, bp, k=args.k, deltas=_delta_grid(args),
                          direction=direction, frame=fr)
    growth_n = derivative_growth(d, f, bp, -fr.N, deltas=_delta_grid(args),
                                 mode="line", frame=fr)
    results = {
        "point": list(bp.p),
        "alpha": args.alpha,
        "normal_exponent": {"value": rep.normal.exponent,
                            "r_squared": rep.normal.r_squared,
                            "flat": rep.normal.flat},
        "tangential_exponent": {"value": rep.tangential.exponent,
                                "r_squared": rep.tangential.r_squared,
                                "flat": rep.tangential.flat},
        "ratio": rep.ratio,
        "normal_derivative_growth": {"slope": growth_n.slope,
                                     "r_squared": growth_n.r_squared},
    }
    _emit(args, {"config": _base_config(args, "gain"),
                 "property": "tangential Hoelder gain for a holomorphic "
                             "test function",
                 "results": results, "diagnostics": []})
    if args.csv:
        report.write_csv(args.csv, ["delta", "s", "abs_df"], rep.samples)
    return 0


def _cmd_sweep(args):
    d = _load_domain(args)
    rng = np.random.default_rng(args.seed)
    kind, _, arg = args.patch.partition(":")
    if kind == "random":
        patch = random_boundary_points(d, int(arg or "10"), rng)
    elif kind == "reference":
        patch = [boundary_point_at(d, r.point) for r in d.reference]
        if arg:
            patch = [bp for bp, r in zip(patch, d.reference) if r.kind == arg]
    elif kind == "points":
        patch = [boundary_point_at(d, _parse_point(p)) for p in arg.split("|")]
    else:
        raise ConfigError(f"unknown patch spec {args.patch!r}")
    directions = None
    if args.directions:
        directions = [np.asarray(_parse_point(p), dtype=complex)
                      for p in args.directions.split("|")]
    lattice = (1.0, 0.5, 0.25, 0.125) if args.lattice else None
    rep = uniform_sweep(d, patch, k=args.k, c1=args.c1, c2=args.c2,
                        deltas=_delta_grid(args), directions=directions,
                        lattice_factors=lattice)
    results = {
        "points": [list(bp.p) for bp in patch],
        "uniform": rep.uniform,
        "entries": list(rep.entries),
        "failures": [{"point_index": pi, "direction_index": di, "delta": dl,
                      "witness_kind": w.kind if w else None}
                     for (pi, di, dl, w) in rep.failures],
        "best_constants": None if rep.best_constants is None else
                          list(rep.best_constants),
    }
    _emit(args, {"config": _base_config(args, "sweep"),
                 "property": "uniform disc property over a boundary patch",
                 "results": results, "diagnostics": []})
    if args.csv:
        rows = [(e["point_index"], e["direction_index"], e["delta"],
                 1.0 if e["contained"] else 0.0) for e in rep.entries]
        report.write_csv(args.csv, ["point", "direction", "delta", "contained"],
                         rows)
    return 0


def _cmd_verify(args):
    from .verify import run_suite

    results = run_suite(args.suite, progress=lambda r: print(r.line(), flush=True))
    payload = {
        "config": _base_config(args, "verify"),
        "property": "acceptance suite",
        "results": [{"criterion": r.cid, "title": r.title, "passed": r.passed,
                     "measured": report.to_jsonable(r.measured), "notes": r.notes}
                    for r in results],
        "diagnostics": [],
    }
    _emit(args, payload)
    return 0 if all(r.passed for r in results) else 1


# --- argument parsing ------------------------------------------------------------


def _add_common(sp, point=True):
    sp.add_argument("--domain", help="catalog family name")
    sp.add_argument("--params", action="append", metavar="K=V",
                    help="domain parameter, repeatable")
    sp.add_argument("--domain-file", help="domain spec file (see docs)")
    if point:
        sp.add_argument("--point", required=True,
                        help='seed or boundary point, "re,im;re,im;..."')
        sp.add_argument("--direction", help="projection direction (same format)")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--out", help="write the JSON report here")
    sp.add_argument("--csv", help="write plot data here")


def _add_delta_grid(sp):
    sp.add_argument("--delta-min", type=float, default=1e-6)
    sp.add_argument("--delta-max", type=float, default=1e-2)
    sp.add_argument("--delta-steps", type=int, default=12)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="discgeom",
        description="numerical boundary geometry of domains {r < 0} in C^n")
    ap.add_argument("--version", action="version", version=f"discgeom {__version__}")
    sub = ap.add_subparsers(dest="cmd", required=True)

    sp = sub.add_parser("list-domains", help="catalog families and reference points")
    _add_common(sp, point=False)
    sp.set_defaults(fn=_cmd_list_domains)

    sp = sub.add_parser("frame", help="boundary point, frame, Levi spectrum")
    _add_common(sp)
    sp.set_defaults(fn=_cmd_frame)

    sp = sub.add_parser("disc", help="bidisc containment and index estimate")
    _add_common(sp)
    sp.add_argument("--tangent", help="tangential direction (projected if needed)")
    sp.add_argument("--k", type=int, default=2)
    sp.add_argument("--k-cap", type=int, default=8)
    sp.add_argument("--c1", type=float, default=0.5)
    sp.add_argument("--c2", type=float, default=1.0)
    _add_delta_grid(sp)
    sp.set_defaults(fn=_cmd_disc)

    sp = sub.add_parser("gain", help="Hoelder gain of a half-space power function")
    _add_common(sp)
    sp.add_argument("--tangent", help="tangential direction")
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--k", type=int, default=2)
    _add_delta_grid(sp)
    sp.set_defaults(fn=_cmd_gain)

    sp = sub.add_parser("sweep", help="uniform disc property over a patch")
    _add_common(sp, point=False)
    sp.add_argument("--patch", required=True,
                    help='"random:N", "reference[:kind]", or "points:p1|p2|..."')
    sp.add_argument("--directions", help='tangent directions "p1|p2|..."')
    sp.add_argument("--k", type=int, default=2)
    sp.add_argument("--c1", type=float, default=0.01)
    sp.add_argument("--c2", type=float, default=0.01)
    sp.add_argument("--lattice", action="store_true",
                    help="search the constants lattice for the largest pass")
    _add_delta_grid(sp)
    sp.set_defaults(fn=_cmd_sweep)

    sp = sub.add_parser("verify", help="run the acceptance suite")
    _add_common(sp, point=False)
    sp.add_argument("--suite", choices=("fast", "full"), default="fast")
    sp.set_defaults(fn=_cmd_verify)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except (ConfigError, UnknownDomainError, BadParameterError, ExprError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except DiscgeomError as exc:
        print(f"analysis error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
