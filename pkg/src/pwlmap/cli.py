"""Command-line interface: ``pwlmap <subcommand> [flags]``.

Exit status: 0 on success, 2 on domain or precondition errors, 3 when
``--strict`` is given and a classification is unresolved, 1 when an output
file cannot be written.
"""
from __future__ import annotations

import argparse
import math
import sys

from . import families as fam
from .circle_map import rotation_number
from .errors import DomainError, PreconditionError, SolverError, SparseCoverageError
from .invariant_circle import build_circle
from .plane_map import HARD_LIMIT, MapParams, iterate
from .rational_dynamics import (FiniteOrder, HyperbolicPair, Irrational, UniqueParabolic,
                                Unresolved, classify, is_finite_order)
from .scan import (ScanConfig, circle_csv, curve_csv, fmt, rotation_curve, scan_csv,
                   scan_grid)

EXIT_OK, EXIT_DOMAIN, EXIT_UNRESOLVED = 0, 2, 3


def _count(text):
    """Integer flag that also takes forms like 1e6."""
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if not v.is_integer():
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    return int(v)


def _range(text):
    try:
        lo, hi = (float(t) for t in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi, got {text!r}")
    return lo, hi


def _grid(text):
    try:
        w, h = (int(t) for t in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected WxH, got {text!r}")
    return w, h


def _add_params(p):
    g = p.add_argument_group("map parameters (give --a/--b or --mu/--nu)")
    g.add_argument("--a", type=float, help="slope for x >= 0")
    g.add_argument("--b", type=float, help="slope for x < 0")
    g.add_argument("--mu", type=float, help="(a - b)/2")
    g.add_argument("--nu", type=float, help="(a + b)/2")


def _params(args) -> MapParams:
    ab = args.a is not None or args.b is not None
    mn = args.mu is not None or args.nu is not None
    if ab and mn:
        raise DomainError("give either --a/--b or --mu/--nu, not both")
    if ab:
        if args.a is None or args.b is None:
            raise DomainError("both --a and --b are required")
        return MapParams(args.a, args.b)
    if args.mu is None or args.nu is None:
        raise DomainError("map parameters required: --a/--b or --mu/--nu")
    return MapParams.from_mu_nu(args.mu, args.nu)


def _write(text, path):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _describe(cls) -> str:
    if isinstance(cls, FiniteOrder):
        return f"class=F period={cls.period} rotation={cls.rotation[0]}/{cls.rotation[1]}"
    if isinstance(cls, UniqueParabolic):
        return (f"class=P rotation={cls.p}/{cls.q} ray_angle={fmt(cls.ray.angle)}"
                f" multiplier={fmt(cls.ray.multiplier)}")
    if isinstance(cls, HyperbolicPair):
        return (f"class=H rotation={cls.p}/{cls.q}"
                f" expanding_angle={fmt(cls.expanding.angle)} lambda={fmt(cls.expanding.multiplier)}"
                f" contracting_angle={fmt(cls.contracting.angle)}"
                f" lambda_inv={fmt(cls.contracting.multiplier)}")
    if isinstance(cls, Irrational):
        return f"class=I rotation={fmt(cls.estimate.value_turns)} err={fmt(cls.estimate.error_bound_turns)}"
    return f"class=U reason={cls.reason}"


def cmd_orbit(args):
    orb = iterate(_params(args), (args.x, args.y), args.n, limit=args.limit)
    lines = ["k,x,y,sign,lifted_angle"]
    for i, (pt, ang) in enumerate(zip(orb.points, orb.lifted_angles)):
        sign = str(orb.signs[i]) if i < len(orb.signs) else ""
        k = i if args.n >= 0 else -i
        lines.append(f"{k},{fmt(pt[0])},{fmt(pt[1])},{sign},{fmt(ang)}")
    _write("\n".join(lines) + "\n", args.out)
    if orb.diverged:
        print(f"diverged at step {orb.diverged_at}", file=sys.stderr)


def cmd_rotnum(args):
    est = rotation_number(_params(args), args.theta0, args.n, q_max=args.qmax)
    cand = "" if est.rational_candidate is None else "%d/%d" % est.rational_candidate
    print(f"rotation={fmt(est.value_turns)} err={fmt(est.error_bound_turns)}"
          f" iterations={est.iterations} candidate={cand}")


def cmd_classify(args):
    cls = classify(_params(args), q_max=args.qmax, N=args.n, theta0=args.theta0)
    print(_describe(cls))
    if args.strict and isinstance(cls, Unresolved):
        return EXIT_UNRESOLVED
    return EXIT_OK


def cmd_solve_nu(args):
    res = fam.solve_nu(args.mu, args.p, args.q, args.theta)
    print(f"nu={fmt(res.nu)} residual={fmt(res.residual)} iterations={res.iterations}")


def cmd_families(args):
    if args.kind == "linear":
        params = MapParams(2 * math.cos(args.theta), 2 * math.cos(args.theta))
        predicted = fam.rotnum_linear(args.theta)
    elif args.kind == "ex32":
        params = fam.params_family32(args.n_index, args.theta)
        predicted = fam.rotnum_family32(args.n_index, args.theta)
    else:
        if args.a is None:
            raise DomainError("--a is required for the ex33 family")
        member = fam.family_ex33(args.n_index, args.a)
        params = member.params
        predicted = member.rotation[0] / member.rotation[1]
    est = rotation_number(params, 0.0, args.n)
    period = is_finite_order(params, args.pmax)
    print(f"a={fmt(params.a)} b={fmt(params.b)} predicted_rotation={fmt(predicted)}"
          f" rotation={fmt(est.value_turns)} err={fmt(est.error_bound_turns)}"
          f" period={'' if period is None else period}")


def cmd_witness(args):
    w = fam.witness_upper_endpoint(args.a, args.b)
    xs = ";".join(fmt(x) for x in w.x)
    print(f"theta={fmt(w.theta)} n={w.n} c={fmt(w.c)} k={fmt(w.k)}"
          f" v=({fmt(w.v.x)},{fmt(w.v.y)}) x={xs}"
          f" rotation={w.predicted_rotation[0]}/{w.predicted_rotation[1]}")


def cmd_circle(args):
    prof = build_circle(_params(args), (args.x, args.y), args.n)
    _write(circle_csv(prof), args.out)
    print(f"samples={len(prof.angles)} closure_defect={fmt(prof.closure_defect)}"
          f" symmetry_defect={fmt(prof.symmetry_defect)}", file=sys.stderr)


def cmd_scan(args):
    ranges = args.range or []
    if len(ranges) > 2:
        raise DomainError("--range may be given at most twice")
    defaults = [(0.0, 2.0), (-2.0, 2.0)]
    ranges = ranges + defaults[len(ranges):]
    w, h = args.grid
    cfg = ScanConfig(x_range=ranges[0], y_range=ranges[1], width=w, height=h,
                     space=args.space, N=args.n, q_max=args.qmax, seed=args.seed,
                     workers=args.workers, csv_path=args.out, ppm_path=args.ppm)
    cells = scan_grid(cfg)
    if not args.out:
        sys.stdout.write(scan_csv(cells))
    if args.strict and any(c.tag == "U" for c in cells):
        return EXIT_UNRESOLVED
    return EXIT_OK


def cmd_curve(args):
    rows = rotation_curve(args.fixed, args.value, args.range, N=args.n, samples=args.samples)
    _write(curve_csv(rows), args.out)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pwlmap", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("orbit", help="print an orbit segment as CSV")
    _add_params(p)
    p.add_argument("--x", type=float, default=1.0, help="start x (default 1)")
    p.add_argument("--y", type=float, default=0.0, help="start y (default 0)")
    p.add_argument("-n", type=_count, default=10, help="steps; negative for backward (default 10)")
    p.add_argument("--limit", type=float, default=HARD_LIMIT, help="modulus cutoff (default 1e300)")
    p.add_argument("--out", help="CSV path (default stdout)")
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("rotnum", help="rotation number estimate")
    _add_params(p)
    p.add_argument("-n", type=_count, default=10**6, help="iterations (default 1e6)")
    p.add_argument("--theta0", type=float, default=0.0, help="start angle (default 0)")
    p.add_argument("--qmax", type=int, default=64, help="largest denominator tried (default 64)")
    p.set_defaults(func=cmd_rotnum)

    p = sub.add_parser("classify", help="classify the dynamics")
    _add_params(p)
    p.add_argument("-n", type=_count, default=10**6, help="iterations for the rotation number (default 1e6)")
    p.add_argument("--theta0", type=float, default=0.0, help="start angle (default 0)")
    p.add_argument("--qmax", type=int, default=64, help="largest denominator tried (default 64)")
    p.add_argument("--strict", action="store_true", help="exit 3 if unresolved")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("solve-nu", help="nu making a direction periodic with rotation p/q")
    p.add_argument("--mu", type=float, required=True, help="fixed mu")
    p.add_argument("--p", type=int, required=True, help="numerator")
    p.add_argument("--q", type=int, required=True, help="denominator")
    p.add_argument("--theta", type=float, default=math.pi / 2, help="direction angle (default pi/2)")
    p.set_defaults(func=cmd_solve_nu)

    p = sub.add_parser("families", help="closed-form family members checked numerically")
    p.add_argument("--kind", choices=["linear", "ex32", "ex33"], required=True,
                   help="linear: a = b = 2cos(theta); ex32: a = 2cos(pi/n), b = 2cos(theta);"
                        " ex33: a < 0 on ab = 4cos^2(pi/2n)")
    p.add_argument("--theta", type=float, default=1.0, help="angle for linear/ex32 (default 1)")
    p.add_argument("--index", dest="n_index", type=int, default=3, help="family index n (default 3)")
    p.add_argument("--a", type=float, help="slope a for ex33")
    p.add_argument("-n", type=_count, default=10**6, help="iterations (default 1e6)")
    p.add_argument("--pmax", type=int, default=1000, help="largest period tried (default 1000)")
    p.set_defaults(func=cmd_families)

    p = sub.add_parser("witness", help="periodic ray at the top of the rotation interval")
    p.add_argument("--a", type=float, required=True, help="slope a in [-2, 2)")
    p.add_argument("--b", type=float, required=True, help="slope b")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("circle", help="invariant-circle profile of a bounded orbit as CSV")
    _add_params(p)
    p.add_argument("--x", type=float, default=1.0, help="start x (default 1)")
    p.add_argument("--y", type=float, default=0.0, help="start y (default 0)")
    p.add_argument("-n", type=_count, default=10**5, help="orbit length (default 1e5)")
    p.add_argument("--out", help="CSV path (default stdout)")
    p.set_defaults(func=cmd_circle)

    p = sub.add_parser("scan", help="classification grid as CSV (and optional PPM)")
    p.add_argument("--grid", type=_grid, default=(50, 50), help="WxH cells (default 50x50)")
    p.add_argument("--range", type=_range, action="append",
                   help="lo:hi; first for columns (mu or a, default 0:2),"
                        " second for rows (nu or b, default -2:2)")
    p.add_argument("--space", choices=["munu", "ab"], default="munu", help="parameter plane (default munu)")
    p.add_argument("-n", type=_count, default=10**4, help="iterations per cell (default 1e4)")
    p.add_argument("--qmax", type=int, default=64, help="largest denominator tried (default 64)")
    p.add_argument("--seed", type=int, default=0, help="probe seed (default 0)")
    p.add_argument("--workers", type=int, default=1, help="worker processes (default 1)")
    p.add_argument("--out", help="CSV path (default stdout)")
    p.add_argument("--ppm", help="PPM raster path")
    p.add_argument("--strict", action="store_true", help="exit 3 if any cell is unresolved")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("curve", help="rotation number along a parameter line as CSV")
    p.add_argument("--fixed", choices=["a", "mu"], required=True, help="parameter held fixed")
    p.add_argument("--value", type=float, required=True, help="its value")
    p.add_argument("--range", type=_range, required=True, help="lo:hi of the swept parameter (b or nu)")
    p.add_argument("--samples", type=int, default=200, help="points on the curve (default 200)")
    p.add_argument("-n", type=_count, default=10**4, help="iterations per point (default 1e4)")
    p.add_argument("--out", help="CSV path (default stdout)")
    p.set_defaults(func=cmd_curve)
    return ap


def _join_ranges(argv):
    # "--range -2:2" would otherwise be read as an unknown flag
    out = []
    it = iter(argv)
    for tok in it:
        if tok == "--range":
            nxt = next(it, None)
            out.append(tok if nxt is None else f"--range={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_join_ranges(argv))
    try:
        code = args.func(args)
    except (DomainError, PreconditionError, SparseCoverageError, SolverError,
            ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return EXIT_OK if code is None else code


if __name__ == "__main__":
    sys.exit(main())
