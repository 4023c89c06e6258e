"""Command-line front end.

Subcommands: semigroup, differentials, theta, tau, verify, degenerate,
evaluate, lumps, pipeline.  Exit code 0 only if every requested check
passed; file outputs are deterministic.
"""

from __future__ import annotations

import argparse
import json
import sys

from .curves import (CurveSpec, Differential, SemigroupSpec, conductor,
                     curve_differential_basis, delta, gaps, gorenstein_check,
                     weierstrass_partition)
from .degen import genus4_family, genus6_family, rescale_and_limit, family_differentials
from .errors import KplumpError
from .grid import (GridSpec, LumpReport, detect_lumps, emit_csv, emit_json,
                   evaluate_grid, float_exact_agreement)
from .kp import TauResult, decay_check, kp1_residual, sos_certify
from .pipeline import compute_tau, compute_theta
from .poly import SparsePoly
from .ratfunc import RationalFunction
from .scalars import scalar
from .theta import ThetaPolynomial


def _load_json(path):
    with open(path) as fh:
        return json.load(fh)


def _load_curve(path) -> CurveSpec:
    return CurveSpec.from_json_dict(_load_json(path))


def _load_override(path):
    if path is None:
        return None
    return [Differential.from_json_dict(d) for d in _load_json(path)]


def _write_json(data, path):
    if path is None:
        json.dump(data, sys.stdout, indent=2, sort_keys=True)
        sys.stdout.write("\n")
    else:
        emit_json(data, path)


def _parse_times(text):
    return tuple(float(v) for v in text.split(","))


def _grid_from_args(args, times) -> GridSpec:
    x0, x1, y0, y1 = (float(v) for v in args.window.split(","))
    return GridSpec((x0, x1), (y0, y1), args.nx, args.ny, tuple(times))


def cmd_semigroup(args):
    s = SemigroupSpec([int(g) for g in args.generators.split(",")])
    gp = gaps(s)
    out = {
        "generators": list(s.generators),
        "gaps": gp,
        "delta": delta(s),
        "conductor": conductor(s),
        "gorenstein": gorenstein_check(s),
        "partition": list(weierstrass_partition(gp).parts) if gp else [],
    }
    _write_json(out, args.out)
    return 0


def cmd_differentials(args):
    curve = _load_curve(args.curve)
    basis = curve_differential_basis(curve, override=_load_override(args.basis_override))
    _write_json([w.to_json_dict() for w in basis], args.out)
    return 0


def cmd_theta(args):
    curve = _load_curve(args.curve)
    theta = compute_theta(
        curve,
        override=_load_override(args.basis_override),
        strategy=args.strategy,
        budget_seconds=args.budget_seconds,
    )
    data = theta.to_json_dict()
    if theta.stats is not None:
        data["stats"] = {
            "pairs_considered": theta.stats.pairs_considered,
            "reduction_steps": theta.stats.reduction_steps,
            "basis_size": theta.stats.basis_size,
            "elapsed": theta.stats.elapsed,
        }
    _write_json(data, args.out)
    return 0


def cmd_tau(args):
    curve = _load_curve(args.curve)
    theta = ThetaPolynomial.from_json_dict(_load_json(args.theta))
    phases = None
    if args.phases:
        phases = [scalar(p) for p in args.phases.split(",")]
    result = compute_tau(
        curve, theta,
        override=_load_override(args.basis_override),
        phases=phases,
    )
    _write_json(result.to_json_dict(), args.out)
    return 0


def _run_checks(result: TauResult, checks):
    failed = []
    details = {}
    for check in checks:
        if check == "reality":
            ok = result.tau.is_real() and result.tau.joint_degree(("x", "y")) % 2 == 0
        elif check == "sos":
            cert = result.certificate
            ok = cert is not None
            if ok:
                recombined = cert.recombine()
                ok = (recombined == result.tau.scale(cert.tau_scale)
                      and cert.constant.re > 0 and not cert.constant.im)
        elif check == "kp1":
            ok = kp1_residual(result.u).is_zero()
        elif check == "decay":
            report = decay_check(result.u, strict=False)
            details["decay"] = {
                "degree_rule_ok": report["degree_rule_ok"],
                "ray_bounded": report["ray_bounded"],
            }
            ok = report["degree_rule_ok"] and report["ray_bounded"]
        else:
            raise ValueError(f"unknown check {check!r}")
        details.setdefault(check, ok)
        if not ok:
            failed.append(check)
    return failed, details


def cmd_verify(args):
    result = TauResult.from_json_dict(_load_json(args.tau))
    checks = args.checks.split(",")
    failed, details = _run_checks(result, checks)
    _write_json({"failed": failed, "details": details}, args.out)
    if failed:
        print("FAILED checks: " + ", ".join(failed), file=sys.stderr)
        return 1
    return 0


def cmd_degenerate(args):
    family = genus4_family() if args.family == "g4" else genus6_family()
    if args.epsilon is not None:
        value = scalar(args.epsilon)
        diffs = []
        for f in family_differentials(family):
            g = f.evaluate_partial({"eps": value})
            num = g.num.with_vars(("u",))
            den = g.den.with_vars(("u",))
            diffs.append(Differential(RationalFunction(num, den), "u"))
    else:
        diffs = rescale_and_limit(family)
    _write_json([w.to_json_dict() for w in diffs], args.out)
    return 0


def cmd_evaluate(args):
    data = _load_json(args.tau)
    result = TauResult.from_json_dict(data)
    certified = bool(data.get("certificate"))
    times = _parse_times(args.times)
    grid = _grid_from_args(args, times)
    rc = 0
    if args.check_exact:
        worst = float_exact_agreement(result.u, n=args.check_exact, seed=args.seed)
        print(f"float/exact max relative error over {args.check_exact} samples: {worst:.3e}")
        if worst > 1e-9:
            print("float/exact agreement FAILED (tolerance 1e-9)", file=sys.stderr)
            rc = 1
    for t in times:
        sampled = evaluate_grid(result.u, grid, t, certified=certified,
                                allow_unverified=args.allow_unverified,
                                workers=args.workers)
        suffix = f"_t{t:+g}".replace("+", "p").replace("-", "m").replace(".", "_")
        if args.format == "csv":
            path = args.out if len(times) == 1 else _suffixed(args.out, suffix)
            emit_csv(sampled["values"], grid, path)
        else:
            payload = {
                "t": t,
                "x_range": list(grid.x_range), "y_range": list(grid.y_range),
                "nx": grid.nx, "ny": grid.ny,
                "values": [[float(v) for v in row] for row in sampled["values"]],
                "min_abs_den": sampled["min_abs_den"],
            }
            path = args.out if len(times) == 1 else _suffixed(args.out, suffix)
            _write_json(payload, path)
    return rc


def _suffixed(path, suffix):
    if path is None:
        return None
    if "." in path:
        stem, _, ext = path.rpartition(".")
        return f"{stem}{suffix}.{ext}"
    return path + suffix


def cmd_lumps(args):
    data = _load_json(args.tau)
    result = TauResult.from_json_dict(data)
    certified = bool(data.get("certificate"))
    times = _parse_times(args.times)
    grid = _grid_from_args(args, times)
    reports = []
    for t in times:
        sampled = evaluate_grid(result.u, grid, t, certified=certified,
                                allow_unverified=args.allow_unverified,
                                workers=args.workers)
        reports.append(detect_lumps(sampled["values"], grid, t, floor=args.floor))
    payload = [r.to_json_dict() for r in reports]
    _write_json(payload if len(payload) > 1 else payload[0], args.out)
    return 0


def cmd_pipeline(args):
    curve = _load_curve(args.curve)
    override = _load_override(args.basis_override)
    theta = compute_theta(curve, override=override, strategy=args.strategy,
                          budget_seconds=args.budget_seconds)
    phases = [scalar(p) for p in args.phases.split(",")] if args.phases else None
    result = compute_tau(curve, theta, override=override, phases=phases)
    checks = args.checks.split(",") if args.checks else ["reality", "kp1"]
    failed, details = _run_checks(result, checks)
    times = _parse_times(args.times) if args.times else ()
    reports = []
    if times:
        grid = _grid_from_args(args, times)
        for t in times:
            sampled = evaluate_grid(result.u, grid, t,
                                    certified=result.certificate is not None,
                                    allow_unverified=args.allow_unverified,
                                    workers=args.workers)
            reports.append(detect_lumps(sampled["values"], grid, t, floor=args.floor))
    payload = {
        "theta": theta.to_json_dict(),
        "tau": result.to_json_dict(),
        "checks": details,
        "failed_checks": failed,
        "lumps": [r.to_json_dict() for r in reports],
    }
    _write_json(payload, args.out)
    if failed:
        print("FAILED checks: " + ", ".join(failed), file=sys.stderr)
        return 1
    return 0


def _add_grid_args(p):
    p.add_argument("--window", default="-10,10,-10,10",
                   help="x0,x1,y0,y1 sampling window")
    p.add_argument("--nx", type=int, default=201)
    p.add_argument("--ny", type=int, default=201)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--allow-unverified", action="store_true")
    p.add_argument("--floor", type=float, default=None,
                   help="lump height floor (default: 10%% of slice max)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="kplump",
                                 description="Rational KP1 multi-lump solutions "
                                             "from curves with cusps")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("semigroup", help="gaps, delta, conductor, partition")
    p.add_argument("generators", help="comma-separated generators, e.g. 2,5")
    p.add_argument("--out")
    p.set_defaults(func=cmd_semigroup)

    p = sub.add_parser("differentials", help="dualizing differential basis")
    p.add_argument("--curve", required=True)
    p.add_argument("--basis-override")
    p.add_argument("--out")
    p.set_defaults(func=cmd_differentials)

    p = sub.add_parser("theta", help="polynomial theta function of a curve")
    p.add_argument("--curve", required=True)
    p.add_argument("--basis-override")
    p.add_argument("--strategy", choices=("sym", "lex", "res"), default="sym")
    p.add_argument("--budget-seconds", type=float, default=300.0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_theta)

    p = sub.add_parser("tau", help="real tau polynomial and KP1 solution")
    p.add_argument("--theta", required=True)
    p.add_argument("--curve", required=True)
    p.add_argument("--basis-override")
    p.add_argument("--phases", help="comma-separated rational phases")
    p.add_argument("--out")
    p.set_defaults(func=cmd_tau)

    p = sub.add_parser("verify", help="re-run checks on a stored tau")
    p.add_argument("--tau", required=True)
    p.add_argument("--checks", default="reality,kp1")
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("degenerate", help="nodal family differentials or limits")
    p.add_argument("--family", choices=("g4", "g6"), required=True)
    p.add_argument("--epsilon", help="rational value; omit for the eps->0 limits")
    p.add_argument("--out")
    p.set_defaults(func=cmd_degenerate)

    p = sub.add_parser("evaluate", help="sample u on a grid")
    p.add_argument("--tau", required=True)
    p.add_argument("--times", required=True, help="comma-separated t values")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--check-exact", type=int, default=0,
                   help="also compare float vs exact at N random points")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    _add_grid_args(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("lumps", help="detect local maxima of u")
    p.add_argument("--tau", required=True)
    p.add_argument("--times", required=True)
    p.add_argument("--out")
    _add_grid_args(p)
    p.set_defaults(func=cmd_lumps)

    p = sub.add_parser("pipeline", help="curve spec to lump report, end to end")
    p.add_argument("--curve", required=True)
    p.add_argument("--basis-override")
    p.add_argument("--strategy", choices=("sym", "lex", "res"), default="sym")
    p.add_argument("--budget-seconds", type=float, default=300.0)
    p.add_argument("--phases")
    p.add_argument("--checks", default="reality,sos,kp1")
    p.add_argument("--times")
    p.add_argument("--out")
    _add_grid_args(p)
    p.set_defaults(func=cmd_pipeline)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except KplumpError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
