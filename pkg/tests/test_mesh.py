import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from catmood.errors import NonFiniteWaveSpeed
from catmood.mesh import (CAT2, CAT6, HLL, RUSANOV, BoundaryCondition, Grid1D, SchemeLevel,
                          SolverConfig, compute_dt, fill_ghosts)
from catmood.systems import Euler, LinearAdvection
from catmood.riemann import SOD_LEFT, SOD_RIGHT

PERIODIC, FREE = BoundaryCondition.PERIODIC, BoundaryCondition.FREE


def ghosted(values, g):
    grid = Grid1D(0.0, 1.0, len(values), n_ghost=g)
    return grid, grid.with_ghosts(np.asarray(values, dtype=float)[:, None])


def test_grid_geometry():
    grid = Grid1D(-1.0, 1.0, 4, n_ghost=3)
    assert grid.dx == 0.5
    np.testing.assert_allclose(grid.centers, [-0.75, -0.25, 0.25, 0.75])
    assert grid.with_ghosts(np.zeros((4, 1))).shape == (10, 1)


@pytest.mark.parametrize("kwargs", [dict(n_cells=0), dict(x_right=-1.0), dict(n_ghost=-1)])
def test_grid_rejects_bad_input(kwargs):
    args = dict(x_left=0.0, x_right=1.0, n_cells=4, n_ghost=1) | kwargs
    with pytest.raises(ValueError):
        Grid1D(**args)


def test_periodic_ghosts_wrap():
    grid, u = ghosted([1, 2, 3, 4], 1)
    fill_ghosts(u, grid, PERIODIC)
    assert u[0, 0] == 4 and u[-1, 0] == 1
    np.testing.assert_array_equal(u[1:-1, 0], [1, 2, 3, 4])


def test_free_ghosts_extrapolate():
    grid, u = ghosted([1, 2, 3, 4], 2)
    fill_ghosts(u, grid, FREE)
    np.testing.assert_array_equal(u[:, 0], [1, 1, 1, 2, 3, 4, 4, 4])


def test_periodic_constant_field():
    grid, u = ghosted([2.5] * 6, 3)
    fill_ghosts(u, grid, PERIODIC)
    assert np.all(u == 2.5)


@given(arrays(np.float64, st.integers(3, 12), elements=st.floats(-1e6, 1e6)),
       st.sampled_from([PERIODIC, FREE]), st.integers(1, 3))
def test_fill_ghosts_idempotent(values, bc, g):
    grid, u = ghosted(values, g)
    once = fill_ghosts(u.copy(), grid, bc)
    twice = fill_ghosts(once.copy(), grid, bc)
    np.testing.assert_array_equal(once, twice)
    np.testing.assert_array_equal(once[grid.interior, 0], values)


def test_dt_advection():
    grid = Grid1D(0.0, 1.0, 10)
    cfg = SolverConfig(cfl=0.9, t_final=10.0)
    u = np.ones((10, 1))
    assert compute_dt(u, LinearAdvection(1.0), grid, cfg, 0.0) == pytest.approx(0.09, rel=1e-14)


def test_dt_sod():
    grid = Grid1D(-1.0, 1.0, 200)
    euler = Euler(1.4)
    x = grid.centers
    U = np.where((x <= 0)[:, None], euler.conserved(*SOD_LEFT), euler.conserved(*SOD_RIGHT))
    cfg = SolverConfig(t_final=0.3)
    # sound speeds sqrt(1.4) and sqrt(1.12); the left one is larger
    assert compute_dt(U, euler, grid, cfg, 0.0) == pytest.approx(0.9 * grid.dx / np.sqrt(1.4),
                                                                rel=1e-14)


def test_dt_clipped_at_final_time():
    grid = Grid1D(0.0, 1.0, 10)
    cfg = SolverConfig(t_final=1.0)
    dt = compute_dt(np.ones((10, 1)), LinearAdvection(1.0), grid, cfg, 1.0 - 1e-6)
    assert dt == pytest.approx(1e-6, rel=1e-9)


def test_dt_zero_wave_speed_returns_remaining():
    grid = Grid1D(0.0, 1.0, 10)
    cfg = SolverConfig(t_final=0.5)
    assert compute_dt(np.ones((10, 1)), LinearAdvection(0.0), grid, cfg, 0.2) == 0.5 - 0.2


def test_dt_nonfinite_speed():
    grid = Grid1D(0.0, 1.0, 4)
    U = np.array([[1.0, 0.0, 2.5]] * 4)
    U[2, 1] = np.inf
    with pytest.raises(NonFiniteWaveSpeed):
        compute_dt(U, Euler(), grid, SolverConfig(), 0.0)


def test_config_defaults():
    cfg = SolverConfig()
    assert cfg.tol1 == 1e-4 and cfg.tol2 == 1e-3
    assert cfg.cascade == (CAT6, CAT2, RUSANOV)
    assert cfg.max_P == 3


@pytest.mark.parametrize("cascade", [(CAT2, CAT6, HLL), (CAT6, CAT2), (CAT6, CAT6, HLL), ()])
def test_config_rejects_bad_cascade(cascade):
    with pytest.raises(ValueError):
        SolverConfig(cascade=cascade)


@pytest.mark.parametrize("cfl", [0.0, 1.5])
def test_config_rejects_bad_cfl(cfl):
    with pytest.raises(ValueError):
        SolverConfig(cfl=cfl)


def test_scheme_level_names():
    assert CAT6.name == "CAT6" and CAT6.order == 6
    assert HLL.is_first_order and HLL.order == 1
    with pytest.raises(ValueError):
        SchemeLevel("weno", 2)
