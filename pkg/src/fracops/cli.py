"""Command-line front end: ``fracops <command> [options]``.

Exit codes: 0 success, 2 bad arguments or violated preconditions,
3 numerical non-convergence or an unwritable output path.
"""
from __future__ import annotations

import argparse
import logging
import math
import sys
from typing import Optional, Sequence

import numpy as np

from . import bounds, fracint, generator, norm_est
from .grid import (Family, Interval, as_exponent, make_uniform_grid, read_table_csv,
                   sample_family, write_table_csv)
from .serialize import Table, emit_report

log = logging.getLogger("fracops")

COMMANDS = ("apply", "norm-bounds", "norm-estimate", "semigroup-check", "alpha-continuity",
            "alpha-zero", "generator-check", "unboundedness", "divergence-demo", "spectrum")


class UsageError(ValueError):
    pass


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _ints(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _exponent(text: str) -> float:
    try:
        return as_exponent(text).p
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--alpha", type=float, default=0.5)
    common.add_argument("--p", type=_exponent, default=2.0, help="Lebesgue exponent, 'inf' allowed")
    common.add_argument("--t0", type=float, default=0.0)
    common.add_argument("--t1", type=float, default=1.0)
    common.add_argument("--n", type=int, default=1024, help="grid nodes")
    common.add_argument("--scheme", choices=fracint.SCHEMES, default="trapezoid")
    common.add_argument("--path", choices=("auto", "direct", "fft"), default="auto")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", dest="fmt", choices=("json", "csv"), default="json")
    common.add_argument("--output", default="-", help="output file, '-' for stdout")
    common.add_argument("-v", "--verbose", action="store_true")

    fam = argparse.ArgumentParser(add_help=False)
    fam.add_argument("--family", default=None,
                     choices=("constant", "power", "monomial", "sigma_p", "bump", "table"))
    fam.add_argument("--nu", type=float, default=0.0, help="exponent of the power family")
    fam.add_argument("--degree", type=int, default=1, help="degree of the monomial family")
    fam.add_argument("--table", help="CSV file with header t,v1..vd")
    fam.add_argument("--dim", type=int, default=1, help="codomain dimension d")

    parser = argparse.ArgumentParser(prog="fracops", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("apply", parents=[common, fam], help="apply J^alpha to a sampled family")
    sub.add_parser("norm-bounds", parents=[common], help="closed-form bounds on N_{alpha,p}")
    est = sub.add_parser("norm-estimate", parents=[common], help="numerical N_{alpha,p}")
    est.add_argument("--method", choices=("svd", "power2", "boyd"))
    est.add_argument("--restarts", type=int, default=norm_est.DEFAULT_RESTARTS)
    est.add_argument("--max-iter", type=int, default=50000)
    sg = sub.add_parser("semigroup-check", parents=[common, fam], help="|J^a J^b f - J^(a+b) f|")
    sg.add_argument("--a", type=float, default=0.3)
    sg.add_argument("--b", type=float, default=0.7)
    ac = sub.add_parser("alpha-continuity", parents=[common], help="|K_a - K_a0| vs eta bound")
    ac.add_argument("--a", type=float, default=0.6)
    ac.add_argument("--a0", type=float, default=0.5)
    az = sub.add_parser("alpha-zero", parents=[common, fam], help="|J^alpha f - f| as alpha -> 0")
    az.add_argument("--alphas", type=_floats, default=list(np.geomspace(1e-1, 1e-3, 9)))
    gc = sub.add_parser("generator-check", parents=[common], help="numeric vs closed-form A phi_n")
    gc.add_argument("--degrees", type=_ints, default=[0, 1, 2, 3, 4])
    ub = sub.add_parser("unboundedness", parents=[common], help="|A phi_n| / |phi_n| growth")
    ub.add_argument("--degrees", type=_ints, default=[1, 2, 4, 8, 16])
    dd = sub.add_parser("divergence-demo", parents=[common], help="J^alpha on [t0, inf)")
    dd.add_argument("--horizons", type=_floats, default=[4.0, 16.0, 64.0, 256.0])
    sp = sub.add_parser("spectrum", parents=[common], help="top singular values of K")
    sp.add_argument("--k", type=int, default=10)
    return parser


def _interval(args) -> Interval:
    return Interval(args.t0, args.t1)


def _grid(args):
    return make_uniform_grid(_interval(args), args.n)


def _family_function(args, default="constant"):
    if args.family is None:
        args.family = default
    if args.family == "table":
        if not args.table:
            raise UsageError("--family table needs --table FILE")
        return read_table_csv(args.table)
    grid = _grid(args)
    if args.family == "constant":
        fam = Family.constant()
    elif args.family == "power":
        fam = Family.power(args.nu)
    elif args.family == "monomial":
        fam = Family.monomial(args.degree)
    elif args.family == "sigma_p":
        fam = Family.sigma_p(args.alpha, args.p)
    else:  # bump: (t - t0)(t1 - t)
        s = grid.elapsed
        return sample_family(Family.table(s * (grid.interval.length - s)), grid)
    return sample_family(fam, grid, d=args.dim)


def _path(args) -> Optional[str]:
    return None if args.path == "auto" else args.path


def cmd_apply(args):
    f = _family_function(args)
    out = fracint.apply_frac_integral(f, args.alpha, args.scheme, _path(args))
    rows = [[t] + list(v) for t, v in zip(out.grid.nodes, out.values)]
    table = Table(["t"] + [f"v{k + 1}" for k in range(out.d)], rows)
    if args.fmt == "csv":
        return write_table_csv(out)
    return {"alpha": args.alpha, "scheme": args.scheme, "n": out.n,
            "t": list(out.grid.nodes), "values": [list(r) for r in out.values]}, table


def cmd_norm_bounds(args):
    if not args.alpha > 0:
        raise UsageError("--alpha must be positive")
    rep = bounds.compile_report(args.alpha, args.p, _interval(args))
    return rep, None


def cmd_norm_estimate(args):
    if not args.alpha > 0:
        raise UsageError("--alpha must be positive")
    mat = norm_est.build_operator_matrix(_grid(args), args.alpha, args.scheme)
    est = norm_est.estimate_norm(mat, args.p, method=args.method, restarts=args.restarts,
                                 seed=args.seed, max_iter=args.max_iter)
    rep = bounds.compile_report(args.alpha, args.p, _interval(args))
    out = est.to_dict()
    out.update(alpha=args.alpha, scheme=args.scheme, tol_disc=norm_est.tol_disc(args.n),
               lower=rep.lower, best_upper=rep.best_upper, generic_upper=rep.generic_upper)
    table = Table(["t", "value"], [[t, v] for t, v in zip(est.maximizer.grid.nodes,
                                                          est.maximizer.values[:, 0])])
    return out, table


def cmd_semigroup(args):
    f = _family_function(args)
    defect = fracint.semigroup_defect(f, args.a, args.b, args.p, args.scheme)
    return {"a": args.a, "b": args.b, "p": args.p, "n": f.n, "defect": defect}, None


def cmd_alpha_continuity(args):
    gap, eta = fracint.alpha_continuity_defect(args.a, args.a0, _grid(args), args.p,
                                               args.scheme, seed=args.seed)
    return {"a": args.a, "a0": args.a0, "p": args.p, "n": args.n,
            "discrete_gap": gap, "eta_bound": eta}, None


def cmd_alpha_zero(args):
    f = _family_function(args, default="bump")
    prof = fracint.alpha_zero_profile(f, args.p, args.alphas, args.scheme)
    table = Table(["alpha", "defect"], prof)
    out = {"p": args.p, "n": f.n, "profile": table}
    try:
        out["slope"] = fracint.loglog_slope(prof)
    except ValueError:
        out["slope"] = None
    return out, table


def cmd_generator_check(args):
    grid = _grid(args)
    rows = []
    for deg in args.degrees:
        fam = Family.monomial(deg) if deg else Family.constant()
        f = sample_family(fam, grid)
        num = generator.generator_apply(f)
        exact = generator.generator_power_closed_form(deg, grid)
        rows.append([deg, generator.interior_l2(num, exact), float(num.values[-1, 0]),
                     float(exact.values[-1, 0])])
    phi1 = generator.log_kernel_convolve(sample_family(Family.constant(), grid)).output
    table = Table(["degree", "interior_l2_error", "numeric_at_t1", "closed_form_at_t1"], rows)
    return {"n": args.n, "log_convolution_of_one_at_t1": float(phi1.values[-1, 0]),
            "degrees": table}, table


def cmd_unboundedness(args):
    rows = []
    for deg in args.degrees:
        ratio, bnd = generator.unboundedness_ratio(deg, args.p, _interval(args))
        rows.append([deg, ratio, bnd])
    table = Table(["n", "ratio", "bound"], rows)
    return {"p": args.p, "t0": args.t0, "t1": args.t1, "ratios": table}, table


def cmd_divergence(args):
    prof = fracint.divergence_profile(args.alpha, args.p, args.horizons, t0=args.t0)
    table = Table(["T", "norm"], prof)
    return {"alpha": args.alpha, "p": args.p, "t0": args.t0,
            "sigma_norm": fracint.sigma_p_norm(args.alpha, args.p), "profile": table}, table


def cmd_spectrum(args):
    mat = norm_est.build_operator_matrix(_grid(args), args.alpha, args.scheme)
    s = norm_est.singular_spectrum(mat, args.k)
    table = Table(["k", "sigma"], [[i + 1, float(v)] for i, v in enumerate(s)])
    return {"alpha": args.alpha, "n": args.n, "singular_values": [float(v) for v in s]}, table


HANDLERS = {
    "apply": cmd_apply,
    "norm-bounds": cmd_norm_bounds,
    "norm-estimate": cmd_norm_estimate,
    "semigroup-check": cmd_semigroup,
    "alpha-continuity": cmd_alpha_continuity,
    "alpha-zero": cmd_alpha_zero,
    "generator-check": cmd_generator_check,
    "unboundedness": cmd_unboundedness,
    "divergence-demo": cmd_divergence,
    "spectrum": cmd_spectrum,
}


def dispatch(args) -> tuple[int, bytes]:
    """Run one parsed command; returns ``(exit_code, report_bytes)``."""
    try:
        result = HANDLERS[args.command](args)
    except norm_est.NonConvergenceError as exc:
        print(f"fracops: {exc}", file=sys.stderr)
        return 3, b""
    except (ValueError, OverflowError) as exc:
        print(f"fracops: error: {exc}", file=sys.stderr)
        return 2, b""
    if isinstance(result, str):
        return 0, result.encode()
    obj, table = result
    if args.fmt == "csv" and table is not None:
        return 0, emit_report(table, "csv")
    return 0, emit_report(obj, args.fmt)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)     # exits with status 2 on bad flags
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    code, payload = dispatch(args)
    if code != 0:
        return code
    try:
        if args.output == "-":
            sys.stdout.buffer.write(payload)
            sys.stdout.flush()
        else:
            with open(args.output, "wb") as fh:
                fh.write(payload)
    except OSError as exc:
        print(f"fracops: cannot write report: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
