"""Compare the compiled and numpy CAT kernels.

    python benchmarks/bench_backends.py [--repeat 5]

Times the face-flux kernel alone for every system and P, then whole solver
runs, and checks that both backends give the same answer.
"""
import argparse
import time

import numpy as np

from catmood import kernels
from catmood.driver import advection_case, run_solver, sod_case
from catmood.systems import Burgers, Euler, LinearAdvection


def best_of(fn, repeat):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def kernel_table(n_faces, repeat):
    rng = np.random.default_rng(0)
    scalar = 1.0 + 0.5 * rng.random((n_faces + 8, 1))
    euler = np.column_stack([1.0 + 0.1 * rng.random(n_faces + 8),
                             0.1 * rng.random(n_faces + 8),
                             2.5 + 0.1 * rng.random(n_faces + 8)])
    cases = [("advection", LinearAdvection(1.0), scalar), ("burgers", Burgers(), scalar),
             ("euler", Euler(1.4), euler)]
    print(f"kernel only, {n_faces} faces (best of {repeat})")
    print(f"{'system':>10} {'P':>2} {'python [ms]':>12} {'cython [ms]':>12} {'speedup':>8} "
          f"{'max|diff|':>10}")
    for name, system, u in cases:
        for P in (1, 2, 3):
            left = np.arange(4, n_faces + 4)
            tp, fp = best_of(lambda: kernels.cat_fluxes(u, left, system, P, 0.4, "python"),
                             repeat)
            if "cython" in kernels.available_backends():
                tc, fc = best_of(lambda: kernels.cat_fluxes(u, left, system, P, 0.4, "cython"),
                                 repeat)
                diff = float(np.max(np.abs(fp - fc)))
                print(f"{name:>10} {P:>2} {1e3 * tp:12.3f} {1e3 * tc:12.3f} {tp / tc:8.1f} "
                      f"{diff:10.2e}")
            else:
                print(f"{name:>10} {P:>2} {1e3 * tp:12.3f} {'n/a':>12}")


def run_table(repeat):
    print("\nfull runs (best of %d)" % repeat)
    for label, case, scheme, n in [("advection", advection_case(), "cat6", 320),
                                   ("advection", advection_case(), "catmood6", 320),
                                   ("sod", sod_case(), "catmood6", 200)]:
        line = f"{label:>10} {scheme:>9} N={n:<4}"
        for backend in kernels.available_backends():
            t, _ = best_of(lambda: run_solver(case, scheme, n, backend=backend,
                                              compute_errors=False), repeat)
            line += f" {backend}={t:.4f}s"
        print(line)


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--faces", type=int, default=2000)
    args = ap.parse_args()
    kernel_table(args.faces, args.repeat)
    run_table(args.repeat)
