import csv
import math
from dataclasses import replace

import numpy as np
import pytest

from catmood.cli import main
from catmood.driver import (RunReport, advection_case, burgers_case, convergence_study,
                            emit_outputs, observed_order, run_solver, sod_case)
from catmood.errors import SolverDiverged
from catmood.mesh import CAT6, CAT2, RUSANOV, SolverConfig


def read_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


@pytest.mark.parametrize("case", [advection_case(), burgers_case(False), sod_case()],
                         ids=lambda c: c.name)
@pytest.mark.parametrize("scheme", ["cat6", "catmood6", "first"])
def test_zero_final_time_returns_initial_condition(case, scheme):
    rep = run_solver(case, scheme, 40, t_final=0.0, snapshot_times=(), compute_errors=False)
    assert rep.n_steps == 0
    np.testing.assert_array_equal(rep.final, case.system.primitives(case.initial(rep.x)))


def test_exact_scheme_has_zero_error_and_blank_orders(tmp_path):
    rows = convergence_study(sod_case(), "exact", [20, 40])
    assert [r.L1_error for r in rows] == [0.0, 0.0]
    assert [r.order for r in rows] == [None, None]
    emit_outputs(None, tmp_path, convergence=rows)
    header, data = read_csv(tmp_path / "convergence.csv")
    assert header == ["N", "L1_error", "order", "cpu_seconds"]
    assert [r[2] for r in data] == ["", ""]


def test_observed_order():
    assert observed_order(1e-2, 1e-2 / 64, 10, 20) == pytest.approx(6.0)
    assert observed_order(0.0, 1.0, 10, 20) is None


def test_convergence_rejects_unsorted_meshes():
    with pytest.raises(ValueError):
        convergence_study(advection_case(), "cat2", [40, 20])


def test_too_few_cells():
    with pytest.raises(ValueError):
        run_solver(advection_case(), "cat6", 5)
    with pytest.raises(ValueError):
        run_solver(advection_case(), "weno5", 40)


def test_final_step_lands_exactly():
    rep = run_solver(advection_case(), "cat2", 17, t_final=0.123)
    assert rep.final_time == 0.123


def test_l1_error_definition():
    case = advection_case()
    rep = run_solver(case, "cat2", 20)
    ref = case.reference(rep.x, 1.0)[:, 0]
    dx = 2 * math.pi / 20
    assert rep.errors["u"] == pytest.approx(dx * np.abs(rep.final[:, 0] - ref).sum(), rel=1e-15)
    assert rep.error_norms["u"]["Linf"] == pytest.approx(np.abs(rep.final[:, 0] - ref).max())


def test_burgers_snapshots_and_reference():
    rep = run_solver(burgers_case(), "catmood6", 50)
    assert sorted(rep.snapshots) == [0.3, 0.65]
    assert set(rep.references) == {0.3, 0.65}
    # reference stays in the initial range
    ref = rep.references[0.65][:, 0]
    assert ref.min() >= 0.1 - 1e-12 and ref.max() <= 2.1 + 1e-12


def test_sod_outputs(tmp_path):
    rep = run_solver(sod_case(), "catmood6", 50)
    files = emit_outputs(rep, tmp_path)
    names = {f.name for f in files}
    assert {"sod_catmood6_N50_t0.3000.csv", "sod_reference_N50_t0.3000.csv",
            "sod_catmood6_N50_demotions.csv", "plot.py"} <= names
    header, data = read_csv(tmp_path / "sod_catmood6_N50_t0.3000.csv")
    assert header == ["x", "rho", "u", "p"] and len(data) == 50
    mantissa = data[0][1].split("e")[0].replace("-", "").replace(".", "")
    assert len(mantissa) >= 12
    header, _ = read_csv(tmp_path / "sod_catmood6_N50_demotions.csv")
    assert header == ["step", "time", "n_cad", "n_pad", "n_nad", "n_rank1", "n_rank2"]
    compile((tmp_path / "plot.py").read_text(), "plot.py", "exec")


def test_empty_snapshot_list_writes_header_only(tmp_path):
    rep = RunReport("sod", "cat6", 10, np.zeros(10), ("rho", "u", "p"))
    files = emit_outputs(rep, tmp_path)
    header, data = read_csv(files[0])
    assert header == ["x", "rho", "u", "p"] and data == []


def test_emit_outputs_reports_path(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    with pytest.raises(OSError, match="file"):
        emit_outputs(None, blocker / "sub")


def test_runs_are_deterministic(tmp_path):
    for d in ("a", "b"):
        emit_outputs(run_solver(burgers_case(), "catmood6", 40), tmp_path / d)
    name = "burgers_catmood6_N40_t0.6500.csv"
    assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_solver_diverged_on_persistent_nan():
    base = advection_case()

    def bad(x):
        u = base.initial(x)
        u[::2] = np.nan
        return u

    case = replace(base, initial=bad)
    cfg = SolverConfig(cascade=(CAT6, CAT2, RUSANOV), diverged_fraction=0.25)
    with pytest.raises(SolverDiverged):
        run_solver(case, "catmood6", 20, cfg=cfg)


def test_fallback_flag_selects_rusanov_for_euler():
    hll = run_solver(sod_case(), "first", 100)
    rus = run_solver(sod_case(), "first", 100, fallback="rusanov")
    assert rus.errors["rho"] != hll.errors["rho"]


# --- command line -----------------------------------------------------------

def test_cli_run(tmp_path, capsys):
    code = main(["run", "--test", "sod", "--scheme", "catmood6", "--cells", "40",
                 "--out", str(tmp_path), "--log-demotions"])
    assert code == 0
    assert (tmp_path / "sod_catmood6_N40_t0.3000.csv").exists()
    assert (tmp_path / "sod_catmood6_N40_demotions.csv").exists()
    assert "L1(rho)" in capsys.readouterr().out


def test_cli_convergence(tmp_path, capsys):
    code = main(["convergence", "--test", "advection", "--scheme", "cat6", "--cells", "20,40",
                 "--out", str(tmp_path)])
    assert code == 0
    header, data = read_csv(tmp_path / "convergence.csv")
    assert [r[0] for r in data] == ["20", "40"]
    assert data[0][2] == "" and float(data[1][2]) > 5


def test_cli_weights(capsys):
    assert main(["weights", "--P", "2", "--k", "1"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "j,gamma,exact"
    assert out[1].endswith(",-1/3")


def test_cli_errors_exit_nonzero(tmp_path, capsys):
    assert main(["weights", "--P", "1", "--k", "3"]) == 2
    assert main(["run", "--test", "advection", "--cells", "3", "--out", str(tmp_path)]) == 2
    assert "error" in capsys.readouterr().err
    with pytest.raises(SystemExit):
        main(["run", "--test", "nope", "--cells", "10"])


def test_cli_printed_delta_form(tmp_path):
    assert main(["run", "--test", "burgers", "--cells", "40", "--delta-form", "printed",
                 "--out", str(tmp_path)]) == 0
