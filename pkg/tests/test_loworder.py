import numpy as np
import pytest
from hypothesis import given, strategies as st

from catmood.loworder import davis_speeds, first_order_fluxes, hll_flux, rusanov_flux
from catmood.riemann import SOD_LEFT, SOD_RIGHT
from catmood.systems import Burgers, Euler, LinearAdvection, euler_flux

EULER = Euler(1.4)
rho_s, p_s, u_s = st.floats(0.05, 5), st.floats(0.05, 5), st.floats(-3, 3)


def prim(r, u, p):
    return EULER.conserved(r, u, p)


@given(st.floats(-5, 5))
def test_rusanov_consistency(u):
    U = np.array([u])
    assert rusanov_flux(U, U, Burgers())[0] == pytest.approx(0.5 * u * u)


def test_rusanov_examples():
    assert rusanov_flux(np.array([2.0]), np.array([0.0]), Burgers())[0] == 3.0
    assert rusanov_flux(np.array([1.0]), np.array([0.0]), LinearAdvection(1.0))[0] == 1.0


def test_hll_supersonic_upwinding():
    U = prim(1.0, 3.0, 1.0)                        # u > c
    np.testing.assert_array_equal(hll_flux(U, U), euler_flux(U))
    UL, UR = prim(1.0, 3.0, 1.0), prim(0.5, 4.0, 0.8)
    assert davis_speeds(UL, UR).s_left >= 0
    np.testing.assert_array_equal(hll_flux(UL, UR), euler_flux(UL))
    UL, UR = prim(1.0, -4.0, 1.0), prim(0.5, -3.0, 0.8)
    np.testing.assert_array_equal(hll_flux(UL, UR), euler_flux(UR))


def test_hll_sod_interface():
    UL, UR = prim(*SOD_LEFT), prim(*SOD_RIGHT)
    s = davis_speeds(UL, UR)
    assert s.s_left == pytest.approx(-np.sqrt(1.4)) and s.s_right == pytest.approx(np.sqrt(1.4))
    assert hll_flux(UL, UR)[0] == pytest.approx(1.225 / (2 * np.sqrt(1.4)), rel=1e-14)
    assert hll_flux(UL, UR)[0] == pytest.approx(0.5177, abs=1e-4)


@given(rho_s, u_s, p_s)
def test_hll_consistency(r, u, p):
    U = prim(r, u, p)
    np.testing.assert_allclose(hll_flux(U, U), euler_flux(U), rtol=1e-12, atol=1e-12)


@given(rho_s, u_s, p_s, rho_s, u_s, p_s)
def test_hll_first_order_update_stays_positive(rl, ul, pl, rr, ur, pr):
    # three cells L | L R | R: the middle cells after one CFL-limited step stay admissible
    U = np.stack([prim(rl, ul, pl)] * 2 + [prim(rr, ur, pr)] * 2)
    dx = 1.0
    dt = 0.5 * dx / EULER.max_speed(U).max()
    F = hll_flux(U[:-1], U[1:])
    new = U[1:-1] - dt / dx * (F[1:] - F[:-1])
    assert np.all(EULER.is_admissible(new))


@given(st.floats(-3, 3), st.floats(-3, 3))
def test_rusanov_at_least_as_diffusive_as_godunov_burgers(ul, ur):
    # Godunov flux for convex f: min over [ul,ur] if ul<=ur, max over [ur,ul] otherwise
    if ul <= ur:
        god = 0.0 if ul <= 0 <= ur else min(0.5 * ul * ul, 0.5 * ur * ur)
    else:
        god = max(0.5 * ul * ul, 0.5 * ur * ur)
    rus = rusanov_flux(np.array([ul]), np.array([ur]), Burgers())[0]
    # numerical viscosity: (F - f_avg) / (ul - ur) is largest for Rusanov
    if ul != ur:
        avg = 0.25 * (ul * ul + ur * ur)
        assert (rus - avg) / (ul - ur) >= (god - avg) / (ul - ur) - 1e-12


def test_first_order_fluxes_dispatch():
    u = np.array([[1.0], [2.0], [3.0]])
    np.testing.assert_allclose(first_order_fluxes(u, [0, 1], Burgers()),
                               rusanov_flux(u[:2], u[1:], Burgers()))
    with pytest.raises(ValueError):
        first_order_fluxes(u, [0], Burgers(), "hll")
    with pytest.raises(ValueError):
        first_order_fluxes(u, [0], Burgers(), "roe")
