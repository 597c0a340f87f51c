"""First-order fallback fluxes: Rusanov (local Lax-Friedrichs) and HLL."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .systems import Euler, euler_flux, euler_pressure


@dataclass(frozen=True)
class WaveSpeedEstimate:
    s_left: np.ndarray
    s_right: np.ndarray


def rusanov_flux(uL, uR, system):
    uL = np.asarray(uL, dtype=float)
    uR = np.asarray(uR, dtype=float)
    with np.errstate(invalid="ignore", over="ignore"):
        alpha = np.maximum(system.max_speed(uL), system.max_speed(uR))[..., None]
        return 0.5 * (system.flux(uL) + system.flux(uR)) - 0.5 * alpha * (uR - uL)


def davis_speeds(UL, UR, gamma: float = 1.4) -> WaveSpeedEstimate:
    with np.errstate(divide="ignore", invalid="ignore"):
        uL, uR = UL[..., 1] / UL[..., 0], UR[..., 1] / UR[..., 0]
        cL = np.sqrt(gamma * euler_pressure(UL, gamma) / UL[..., 0])
        cR = np.sqrt(gamma * euler_pressure(UR, gamma) / UR[..., 0])
    return WaveSpeedEstimate(np.minimum(uL - cL, uR - cR), np.maximum(uL + cL, uR + cR))


def hll_flux(UL, UR, gamma: float = 1.4):
    """HLL flux with Davis wave-speed estimates.

    A degenerate fan (``s_left == s_right``, only possible for zero sound
    speed) returns the left flux.
    """
    UL = np.asarray(UL, dtype=float)
    UR = np.asarray(UR, dtype=float)
    FL, FR = euler_flux(UL, gamma), euler_flux(UR, gamma)
    s = davis_speeds(UL, UR, gamma)
    sl, sr = s.s_left[..., None], s.s_right[..., None]
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        mid = (sr * FL - sl * FR + sl * sr * (UR - UL)) / (sr - sl)
    return np.where((sl >= 0) | (sr == sl), FL, np.where(sr <= 0, FR, mid))


def first_order_fluxes(u, left_cells, system, kind: str = "rusanov"):
    """Fluxes at the faces right of ``left_cells`` in the ghosted field ``u``."""
    uL, uR = u[left_cells], u[np.asarray(left_cells) + 1]
    if kind == "hll":
        if not isinstance(system, Euler):
            raise ValueError("HLL is implemented for the Euler system only")
        return hll_flux(uL, uR, system.gamma)
    if kind == "rusanov":
        return rusanov_flux(uL, uR, system)
    raise ValueError(f"unknown first-order flux {kind!r}")
