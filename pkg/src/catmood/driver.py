"""Time integration, the three benchmark problems, and reporting."""
from __future__ import annotations

import csv
import functools
import math
import time
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable

import numpy as np

from .cat import cat_update_sweep, conservative_update, face_left_cells
from .errors import SolverDiverged
from .mesh import (CAT2, CAT4, CAT6, HLL, RUSANOV, BoundaryCondition, Grid1D, SchemeLevel,
                   SolverConfig, compute_dt, fill_ghosts)
from .mood import level_fluxes, mood_step
from .riemann import SOD_LEFT, SOD_RIGHT, exact_sod
from .systems import Burgers, Euler, LinearAdvection, ScalarBounds, exact_advection

SCHEMES = ("cat2", "cat4", "cat6", "catmood6", "first", "exact")


@dataclass(frozen=True)
class TestCase:
    """A benchmark problem.

    ``initial(x)`` returns conserved point values ``(n, M)``;
    ``reference(x, t)`` returns the reference in output variables ``(n, M)``.
    """

    name: str
    x_left: float
    x_right: float
    t_final: float
    bc: BoundaryCondition
    system: object
    initial: Callable
    reference: Callable
    bounds: ScalarBounds | None = None
    snapshot_times: tuple[float, ...] = ()

    __test__ = False  # keep pytest from collecting this class


def _advection_u0(x):
    return 0.5 * np.sin(x) + 1.0


def _burgers_u0(x):
    x = np.asarray(x, dtype=float)
    return np.where(x <= 0.5, 1.1, np.where(x < 1.5, 2.1, 0.1))


def advection_case(b: float = 1.0) -> TestCase:
    period = 2.0 * math.pi
    return TestCase(
        "advection", 0.0, period, 1.0, BoundaryCondition.PERIODIC, LinearAdvection(b),
        initial=lambda x: _advection_u0(x)[:, None],
        reference=lambda x, t: exact_advection(_advection_u0, b, x, t, 0.0, period)[:, None],
        bounds=ScalarBounds(0.5, 1.5),
    )


@functools.lru_cache(maxsize=8)
def burgers_reference_solution(t: float, n_cells: int = 2000):
    """First-order Rusanov solution of the Burgers test on a fine mesh."""
    case = burgers_case(with_reference=False)
    rep = run_solver(case, "first", n_cells, t_final=t)
    return rep.x, rep.final[:, 0]


def burgers_case(with_reference: bool = True) -> TestCase:
    def reference(x, t):
        if t == 0:
            return _burgers_u0(x)[:, None]
        xf, uf = burgers_reference_solution(float(t))
        return np.interp(x, xf, uf, period=1.7)[:, None]

    return TestCase(
        "burgers", 0.0, 1.7, 0.65, BoundaryCondition.PERIODIC, Burgers(),
        initial=lambda x: _burgers_u0(x)[:, None],
        reference=reference if with_reference else (lambda x, t: np.full((len(x), 1), np.nan)),
        bounds=ScalarBounds(0.1, 2.1),
        snapshot_times=(0.3,),
    )


def sod_case(gamma: float = 1.4) -> TestCase:
    system = Euler(gamma)

    def initial(x):
        prim = exact_sod(x, 0.0, SOD_LEFT, SOD_RIGHT, gamma)
        return system.conserved(*prim)

    return TestCase(
        "sod", -1.0, 1.0, 0.3, BoundaryCondition.FREE, system, initial,
        reference=lambda x, t: np.stack(exact_sod(x, t, SOD_LEFT, SOD_RIGHT, gamma), axis=-1),
    )


def make_case(name: str, gamma: float = 1.4) -> TestCase:
    if name == "advection":
        return advection_case()
    if name == "burgers":
        return burgers_case()
    if name == "sod":
        return sod_case(gamma)
    raise ValueError(f"unknown test {name!r}")


@dataclass
class RunReport:
    test: str
    scheme: str
    n_cells: int
    x: np.ndarray
    var_names: tuple[str, ...]
    snapshots: dict[float, np.ndarray] = field(default_factory=dict)
    references: dict[float, np.ndarray] = field(default_factory=dict)
    errors: dict[str, float] = field(default_factory=dict)
    error_norms: dict[str, dict[str, float]] = field(default_factory=dict)
    cpu_seconds: float = 0.0
    n_steps: int = 0
    demotions: int = 0
    demotion_log: list[dict] = field(default_factory=list)
    max_mood_iterations: int = 0
    mass: list[np.ndarray] = field(default_factory=list)
    min_density: float = math.inf
    min_pressure: float = math.inf
    nonfinite_accepted: bool = False

    @property
    def final_time(self) -> float:
        return max(self.snapshots)

    @property
    def final(self) -> np.ndarray:
        """Final solution in output (primitive) variables."""
        return self.snapshots[self.final_time]


def default_cascade(system, fallback: str | None = None) -> tuple[SchemeLevel, ...]:
    if fallback is None:
        fallback = "rusanov" if getattr(system, "is_scalar", False) else "hll"
    return (CAT6, CAT2, HLL if fallback == "hll" else RUSANOV)


def l1_error(u, ref, dx: float) -> float:
    return float(dx * np.sum(np.abs(u - ref)))


def run_solver(test: TestCase, scheme: str, n_cells: int, cfl: float = 0.9,
               cfg: SolverConfig | None = None, *, t_final: float | None = None,
               fallback: str | None = None, snapshot_times=None,
               compute_errors: bool = True, backend=None) -> RunReport:
    """Advance ``test`` to its final time with one scheme.

    ``scheme`` is one of ``cat2``, ``cat4``, ``cat6``, ``catmood6``, ``first``
    or ``exact`` (returns the reference itself, for debugging the tooling).
    """
    scheme = scheme.lower()
    if scheme not in SCHEMES:
        raise ValueError(f"unknown scheme {scheme!r}")
    system = test.system
    t_end = test.t_final if t_final is None else float(t_final)
    base = cfg or SolverConfig(cascade=default_cascade(system, fallback))
    cfg = replace(base, cfl=cfl, t_final=t_end)
    P_need = cfg.max_P
    if n_cells < 2 * P_need:
        raise ValueError(f"need at least {2 * P_need} cells")
    grid = Grid1D(test.x_left, test.x_right, n_cells, n_ghost=max(P_need, 1))
    x = grid.centers
    bc = test.bc
    first_kind = cfg.cascade[-1].kind
    unlimited = {"cat2": CAT2, "cat4": CAT4, "cat6": CAT6}.get(scheme)

    times = snapshot_times if snapshot_times is not None else test.snapshot_times
    stops = sorted({float(s) for s in times if 0 <= s < t_end} | {t_end})

    report = RunReport(test.name, scheme, n_cells, x, system.var_names)
    u = grid.with_ghosts(test.initial(x))
    fill_ghosts(u, grid, bc)
    report.mass.append(u[grid.interior].sum(axis=0) * grid.dx)

    def record(t):
        interior = u[grid.interior]
        report.snapshots[t] = (test.reference(x, t) if scheme == "exact"
                               else system.primitives(interior).copy())

    def track_admissibility(interior):
        if isinstance(system, Euler):
            report.min_density = min(report.min_density, float(np.min(interior[:, 0])))
            report.min_pressure = min(report.min_pressure,
                                      float(np.min(system.pressure(interior))))
        if not np.all(np.isfinite(interior)):
            report.nonfinite_accepted = True

    track_admissibility(u[grid.interior])
    if stops[0] == 0.0:
        record(0.0)
    t = 0.0
    start = time.perf_counter()
    for stop in stops:
        while t < stop and scheme != "exact":
            dt = compute_dt(u, system, grid, cfg, t, t_stop=stop)
            if unlimited is not None:
                new, _ = cat_update_sweep(u, system, unlimited.P, grid, dt, backend=backend)
            elif scheme == "first":
                fl = level_fluxes(cfg.cascade[-1], u, face_left_cells(grid), system,
                                  dt / grid.dx)
                new = conservative_update(u, fl, grid, dt)
            else:
                new, rep = mood_step(u, system, cfg.cascade, grid, dt, bc, cfg,
                                     test.bounds, backend=backend)
                report.demotions += rep.demotions
                report.max_mood_iterations = max(report.max_mood_iterations, rep.iterations)
                counts = rep.rank_counts(len(cfg.cascade))
                row = {"step": report.n_steps + 1, "time": t + dt, "n_cad": rep.n_cad,
                       "n_pad": rep.n_pad, "n_nad": rep.n_nad}
                row.update({f"n_rank{r}": counts[r] for r in range(1, len(counts))})
                report.demotion_log.append(row)
                if rep.unresolved_cad.sum() > cfg.diverged_fraction * n_cells:
                    raise SolverDiverged(
                        f"{int(rep.unresolved_cad.sum())} cells non-finite at first order "
                        f"(step {report.n_steps + 1}, t={t:.6g})")
            u[grid.interior] = new
            fill_ghosts(u, grid, bc)
            t = stop if t + dt >= stop else t + dt
            report.n_steps += 1
            track_admissibility(new)
            report.mass.append(new.sum(axis=0) * grid.dx)
        t = stop
        record(stop)
    report.cpu_seconds = time.perf_counter() - start

    if compute_errors:
        for ts in report.snapshots:
            report.references[ts] = test.reference(x, ts)
        ref = report.references[t_end]
        for k, name in enumerate(system.var_names):
            diff = np.abs(report.final[:, k] - ref[:, k])
            report.errors[name] = l1_error(report.final[:, k], ref[:, k], grid.dx)
            report.error_norms[name] = {"L1": report.errors[name],
                                        "L1_mean": float(diff.mean()),
                                        "Linf": float(diff.max())}
    return report


@dataclass
class ConvergenceRow:
    N: int
    L1_error: float
    order: float | None
    cpu_seconds: float
    demotions: int = 0


def observed_order(e_coarse, e_fine, n_coarse, n_fine):
    if not (e_coarse > 0 and e_fine > 0):
        return None
    return math.log(e_coarse / e_fine) / math.log(n_fine / n_coarse)


def convergence_study(test: TestCase, scheme: str, meshes, cfl: float = 0.9,
                      variable: str | None = None, **kwargs) -> list[ConvergenceRow]:
    meshes = list(meshes)
    if any(b <= a for a, b in zip(meshes, meshes[1:])):
        raise ValueError("meshes must be strictly increasing")
    var = variable or test.system.var_names[0]
    rows: list[ConvergenceRow] = []
    for n in meshes:
        rep = run_solver(test, scheme, n, cfl, **kwargs)
        err = rep.errors[var]
        order = observed_order(rows[-1].L1_error, err, rows[-1].N, n) if rows else None
        rows.append(ConvergenceRow(n, err, order, rep.cpu_seconds, rep.demotions))
    return rows


# --- output -----------------------------------------------------------------

def _fmt(v) -> str:
    return f"{v:.15e}"


def _write_csv(path: Path, header, rows):
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(header)
            w.writerows(rows)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc
    return path


def emit_outputs(report: RunReport | None, out_dir, convergence=None) -> list[Path]:
    """Write solution/reference/convergence CSVs and a matplotlib plot script."""
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {out}: {exc}") from exc
    written: list[Path] = []
    solution_files = []
    if report is not None:
        header = ["x", *report.var_names]
        stem = f"{report.test}_{report.scheme}_N{report.n_cells}"
        if not report.snapshots:
            written.append(_write_csv(out / f"{stem}.csv", header, []))
        for ts, sol in sorted(report.snapshots.items()):
            name = f"{stem}_t{ts:.4f}.csv"
            written.append(_write_csv(out / name, header, (
                [_fmt(xi), *map(_fmt, row)] for xi, row in zip(report.x, sol))))
            solution_files.append(name)
            ref = report.references.get(ts)
            if ref is not None:
                rname = f"{report.test}_reference_N{report.n_cells}_t{ts:.4f}.csv"
                written.append(_write_csv(out / rname, header, (
                    [_fmt(xi), *map(_fmt, row)] for xi, row in zip(report.x, ref))))
                solution_files.append(rname)
        if report.demotion_log:
            cols = list(report.demotion_log[0])
            written.append(_write_csv(out / f"{stem}_demotions.csv", cols, (
                [r[c] if c != "time" else _fmt(r[c]) for c in cols]
                for r in report.demotion_log)))
    if convergence is not None:
        written.append(_write_csv(out / "convergence.csv",
                                  ["N", "L1_error", "order", "cpu_seconds"], (
            [r.N, _fmt(r.L1_error), "" if r.order is None else f"{r.order:.6f}",
             _fmt(r.cpu_seconds)] for r in convergence)))
    written.append(_write_plot_script(out, solution_files, convergence is not None))
    return written


_PLOT_TEMPLATE = '''"""Plot the CSV files written next to this script."""
import csv
from pathlib import Path

import matplotlib.pyplot as plt

HERE = Path(__file__).parent
SOLUTIONS = {solutions!r}
CONVERGENCE = {convergence!r}


def load(name):
    with open(HERE / name) as fh:
        rows = list(csv.reader(fh))
    header, data = rows[0], rows[1:]
    return header, [[float(v) if v else float("nan") for v in r] for r in data]


if SOLUTIONS:
    header, _ = load(SOLUTIONS[0])
    fig, axes = plt.subplots(1, len(header) - 1, figsize=(5 * (len(header) - 1), 4),
                             squeeze=False)
    for name in SOLUTIONS:
        _, data = load(name)
        for k, ax in enumerate(axes[0]):
            ax.plot([r[0] for r in data], [r[k + 1] for r in data],
                    "-" if "reference" in name else ".", label=name[:-4])
            ax.set_title(header[k + 1])
    axes[0][0].legend(fontsize="small")
    fig.savefig(HERE / "solutions.png", dpi=150)

if CONVERGENCE:
    _, data = load("convergence.csv")
    fig, ax = plt.subplots()
    ax.loglog([r[0] for r in data], [r[1] for r in data], "o-")
    ax.set_xlabel("N")
    ax.set_ylabel("L1 error")
    fig.savefig(HERE / "convergence.png", dpi=150)
'''


def _write_plot_script(out: Path, solutions, convergence: bool) -> Path:
    path = out / "plot.py"
    try:
        path.write_text(_PLOT_TEMPLATE.format(solutions=solutions, convergence=convergence),
                        encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc
    return path
