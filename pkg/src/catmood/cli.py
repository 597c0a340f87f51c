"""Command-line entry point: ``catmood run|convergence|weights``."""
from __future__ import annotations

import argparse
import csv
import sys
from fractions import Fraction

from .driver import SCHEMES, convergence_study, emit_outputs, make_case, run_solver
from .errors import CatMoodError
from .mesh import SolverConfig
from .weights import make_weights

TESTS = ("advection", "burgers", "sod")


def _common(p: argparse.ArgumentParser):
    p.add_argument("--test", choices=TESTS, required=True)
    p.add_argument("--scheme", choices=[s for s in SCHEMES if s != "exact"], default="catmood6")
    p.add_argument("--cfl", type=float, default=0.9)
    p.add_argument("--tfinal", type=float, default=None)
    p.add_argument("--gamma", type=float, default=1.4)
    p.add_argument("--out", default="out")
    p.add_argument("--delta-form", choices=("product", "printed"), default="product")
    p.add_argument("--fallback", choices=("rusanov", "hll"), default=None,
                   help="first-order scheme (default: rusanov for scalars, hll for Euler)")
    p.add_argument("--tol1", type=float, default=1e-4)
    p.add_argument("--tol2", type=float, default=1e-3)
    p.add_argument("--backend", choices=("cython", "python"), default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="catmood", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one test case")
    _common(run)
    run.add_argument("--cells", type=int, required=True)
    run.add_argument("--log-demotions", action="store_true")
    run.add_argument("--snapshots", default=None,
                     help="comma-separated extra output times")

    conv = sub.add_parser("convergence", help="mesh refinement study")
    _common(conv)
    conv.add_argument("--cells", default="10,20,40,80,160,320")

    w = sub.add_parser("weights", help="print a differentiation weight table as CSV")
    w.add_argument("--P", type=int, required=True)
    w.add_argument("--k", type=int, required=True)
    w.add_argument("--q", default="0")
    return parser


def _config(args, case) -> SolverConfig:
    from .driver import default_cascade

    return SolverConfig(cfl=args.cfl, t_final=case.t_final,
                        cascade=default_cascade(case.system, args.fallback),
                        tol1=args.tol1, tol2=args.tol2, delta_form=args.delta_form)


def _run(args) -> int:
    case = make_case(args.test, args.gamma)
    snaps = None
    if args.snapshots:
        snaps = tuple(float(s) for s in args.snapshots.split(","))
    elif args.tfinal is None:
        snaps = case.snapshot_times
    report = run_solver(case, args.scheme, args.cells, args.cfl, _config(args, case),
                        t_final=args.tfinal, fallback=args.fallback, snapshot_times=snaps,
                        backend=args.backend)
    if not args.log_demotions:
        report.demotion_log = []
    files = emit_outputs(report, args.out)
    errs = ", ".join(f"L1({k})={v:.6e}" for k, v in report.errors.items())
    print(f"{case.name} {args.scheme} N={args.cells}: {report.n_steps} steps, "
          f"{report.cpu_seconds:.3f} s, demotions={report.demotions}, {errs}")
    for f in files:
        print(f"  wrote {f}")
    return 0


def _convergence(args) -> int:
    case = make_case(args.test, args.gamma)
    meshes = [int(n) for n in args.cells.split(",")]
    rows = convergence_study(case, args.scheme, meshes, args.cfl, cfg=_config(args, case),
                             t_final=args.tfinal, fallback=args.fallback,
                             backend=args.backend)
    print(f"{'N':>6} {'L1 error':>14} {'order':>8} {'cpu [s]':>10} {'demotions':>10}")
    for r in rows:
        order = "" if r.order is None else f"{r.order:.2f}"
        print(f"{r.N:>6} {r.L1_error:>14.4e} {order:>8} {r.cpu_seconds:>10.4f} "
              f"{r.demotions:>10}")
    for f in emit_outputs(None, args.out, convergence=rows):
        print(f"  wrote {f}")
    return 0


def _weights(args) -> int:
    table = make_weights(args.P, args.k, Fraction(args.q))
    w = csv.writer(sys.stdout)
    w.writerow(["j", "gamma", "exact"])
    for j, g, e in zip(table.nodes, table.gamma, table.exact):
        w.writerow([j, f"{g:.17g}", str(e)])
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"run": _run, "convergence": _convergence, "weights": _weights}[args.command]
    try:
        return handler(args)
    except (CatMoodError, OSError, ValueError) as exc:
        print(f"catmood: error: {exc}", file=sys.stderr)
        return 2
