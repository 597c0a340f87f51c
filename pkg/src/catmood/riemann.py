"""Exact Riemann solver for the perfect-gas Euler equations.

Newton iteration on the star pressure followed by self-similar sampling
(Toro, *Riemann Solvers and Numerical Methods for Fluid Dynamics*, ch. 4).
All functions broadcast over arrays of left/right states, so the same code
samples one Riemann fan or solves a Riemann problem at every face of a mesh.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NoConvergence, VacuumGenerated

SOD_LEFT = (1.0, 0.0, 1.0)
SOD_RIGHT = (0.125, 0.0, 0.1)


def _pressure_function(p, rho, pk, ck, gamma):
    """Toro's f_K(p) and its derivative for one side."""
    a = 2.0 / ((gamma + 1.0) * rho)
    b = (gamma - 1.0) / (gamma + 1.0) * pk
    shock = p > pk
    with np.errstate(invalid="ignore", divide="ignore"):
        sq = np.sqrt(a / (p + b))
        f_shock = (p - pk) * sq
        df_shock = sq * (1.0 - 0.5 * (p - pk) / (b + p))
        ratio = p / pk
        z = (gamma - 1.0) / (2.0 * gamma)
        f_raref = 2.0 * ck / (gamma - 1.0) * (ratio**z - 1.0)
        df_raref = ratio ** (-(gamma + 1.0) / (2.0 * gamma)) / (rho * ck)
    return np.where(shock, f_shock, f_raref), np.where(shock, df_shock, df_raref)


@dataclass
class StarState:
    gamma: float
    left: tuple
    right: tuple
    p_star: np.ndarray
    u_star: np.ndarray
    iterations: int

    def rho_star(self, side: str):
        rho, _, p = self.left if side == "left" else self.right
        g = self.gamma
        ratio = self.p_star / p
        gm = (g - 1.0) / (g + 1.0)
        return np.where(ratio > 1.0, rho * (ratio + gm) / (gm * ratio + 1.0),
                        rho * ratio ** (1.0 / g))

    def shock_speed(self, side: str):
        """Speed of the shock on ``side`` (meaningful only where it is a shock)."""
        rho, u, p = self.left if side == "left" else self.right
        g = self.gamma
        c = np.sqrt(g * p / rho)
        term = np.sqrt((g + 1.0) / (2.0 * g) * self.p_star / p + (g - 1.0) / (2.0 * g))
        return u - c * term if side == "left" else u + c * term


def solve_star(left, right, gamma: float = 1.4, tol: float = 1e-12,
               max_iter: int = 100) -> StarState:
    """Star-region pressure and velocity of the Riemann problem(s)."""
    rl, ul, pl = (np.asarray(v, dtype=float) for v in left)
    rr, ur, pr = (np.asarray(v, dtype=float) for v in right)
    cl = np.sqrt(gamma * pl / rl)
    cr = np.sqrt(gamma * pr / rr)
    du = ur - ul
    if np.any(2.0 / (gamma - 1.0) * (cl + cr) <= du):
        raise VacuumGenerated("pressure positivity condition violated")

    z = (gamma - 1.0) / (2.0 * gamma)
    # two-rarefaction guess
    p = ((cl + cr - 0.5 * (gamma - 1.0) * du) / (cl / pl**z + cr / pr**z)) ** (1.0 / z)
    p = np.maximum(p, tol)
    for it in range(1, max_iter + 1):
        fl, dfl = _pressure_function(p, rl, pl, cl, gamma)
        fr, dfr = _pressure_function(p, rr, pr, cr, gamma)
        step = (fl + fr + du) / (dfl + dfr)
        p_new = np.maximum(p - step, tol)
        change = np.abs(p_new - p)
        p = p_new
        if np.all(change <= tol * np.maximum(1.0, p)):
            break
    else:
        raise NoConvergence(f"star pressure not converged after {max_iter} iterations")
    fl, _ = _pressure_function(p, rl, pl, cl, gamma)
    fr, _ = _pressure_function(p, rr, pr, cr, gamma)
    u = 0.5 * (ul + ur) + 0.5 * (fr - fl)
    return StarState(gamma, (rl, ul, pl), (rr, ur, pr), p, u, it)


def sample(star: StarState, xi):
    """Primitive state ``(rho, u, p)`` of the self-similar solution at ``xi = x/t``."""
    g = star.gamma
    rl, ul, pl = star.left
    rr, ur, pr = star.right
    ps, us = star.p_star, star.u_star
    xi = np.asarray(xi, dtype=float)
    cl = np.sqrt(g * pl / rl)
    cr = np.sqrt(g * pr / rr)
    gm1, gp1 = g - 1.0, g + 1.0

    # left side of the contact
    shock_l = ps > pl
    sl = star.shock_speed("left")
    rho_sl = star.rho_star("left")
    c_sl = cl * (ps / pl) ** (gm1 / (2.0 * g))
    head_l = ul - cl
    tail_l = us - c_sl
    fan_c = 2.0 / gp1 * (cl + 0.5 * gm1 * (ul - xi))
    fan_u = 2.0 / gp1 * (cl + 0.5 * gm1 * ul + xi)
    with np.errstate(invalid="ignore"):
        fan_rho = rl * (fan_c / cl) ** (2.0 / gm1)
        fan_p = pl * (fan_c / cl) ** (2.0 * g / gm1)
    in_left = np.where(shock_l, xi <= sl, xi <= head_l)
    in_fan_l = ~shock_l & (xi > head_l) & (xi < tail_l)
    rho_L = np.where(in_left, rl, np.where(in_fan_l, fan_rho, rho_sl))
    u_L = np.where(in_left, ul, np.where(in_fan_l, fan_u, us))
    p_L = np.where(in_left, pl, np.where(in_fan_l, fan_p, ps))

    # right side of the contact
    shock_r = ps > pr
    sr = star.shock_speed("right")
    rho_sr = star.rho_star("right")
    c_sr = cr * (ps / pr) ** (gm1 / (2.0 * g))
    head_r = ur + cr
    tail_r = us + c_sr
    fan_c = 2.0 / gp1 * (cr - 0.5 * gm1 * (ur - xi))
    fan_u = 2.0 / gp1 * (-cr + 0.5 * gm1 * ur + xi)
    with np.errstate(invalid="ignore"):
        fan_rho = rr * (fan_c / cr) ** (2.0 / gm1)
        fan_p = pr * (fan_c / cr) ** (2.0 * g / gm1)
    in_right = np.where(shock_r, xi >= sr, xi >= head_r)
    in_fan_r = ~shock_r & (xi < head_r) & (xi > tail_r)
    rho_R = np.where(in_right, rr, np.where(in_fan_r, fan_rho, rho_sr))
    u_R = np.where(in_right, ur, np.where(in_fan_r, fan_u, us))
    p_R = np.where(in_right, pr, np.where(in_fan_r, fan_p, ps))

    left_of_contact = xi <= us
    return (np.where(left_of_contact, rho_L, rho_R),
            np.where(left_of_contact, u_L, u_R),
            np.where(left_of_contact, p_L, p_R))


def exact_sod(x, t: float, left=SOD_LEFT, right=SOD_RIGHT, gamma: float = 1.4,
              x0: float = 0.0):
    """Exact solution ``(rho, u, p)`` of a Riemann problem centred at ``x0``.

    The left state occupies ``x <= x0`` initially.
    """
    x = np.asarray(x, dtype=float)
    if t < 0:
        raise ValueError("t must be non-negative")
    if t == 0:
        is_left = x <= x0
        return tuple(np.where(is_left, lv, rv) for lv, rv in zip(left, right))
    star = solve_star(left, right, gamma)
    return sample(star, (x - x0) / t)
