"""Conservation laws: linear advection, Burgers and the 1D Euler equations.

States are arrays whose last axis holds the ``M`` conserved variables, so every
method below works on a single state ``(M,)`` or a whole field ``(n, M)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Protocol

import numpy as np

from .errors import InadmissibleState

# kernel ids understood by the compiled/numpy CAT kernels
ADVECTION_ID, BURGERS_ID, EULER_ID = 0, 1, 2


@dataclass(frozen=True)
class ScalarBounds:
    """Global bounds of the initial data; the maximum principle keeps the
    solution inside them."""

    u_min: float
    u_max: float
    slack: float = 1e-8

    def __post_init__(self):
        if self.u_min > self.u_max:
            raise ValueError("u_min must not exceed u_max")

    @classmethod
    def of(cls, values) -> "ScalarBounds":
        values = np.asarray(values, dtype=float)
        return cls(float(values.min()), float(values.max()))

    def contains(self, u) -> np.ndarray:
        return (u >= self.u_min - self.slack) & (u <= self.u_max + self.slack)


class ConservationLaw(Protocol):
    M: int
    var_names: tuple[str, ...]
    kernel_id: int
    kernel_param: float

    def flux(self, U: np.ndarray) -> np.ndarray: ...
    def max_speed(self, U: np.ndarray) -> np.ndarray: ...
    def is_admissible(self, U: np.ndarray, bounds: ScalarBounds | None = None) -> np.ndarray: ...
    def nad_variables(self, U: np.ndarray) -> np.ndarray: ...
    def primitives(self, U: np.ndarray) -> np.ndarray: ...


def scalar_flux(u, kind: str = "burgers", b: float = 1.0):
    """``b*u`` for ``kind="advection"``, ``u**2/2`` for ``kind="burgers"``."""
    if kind == "advection":
        return b * u
    if kind == "burgers":
        return 0.5 * u * u
    raise ValueError(f"unknown scalar flux {kind!r}")


class _Scalar:
    M = 1
    var_names = ("u",)
    is_scalar = True

    def is_admissible(self, U, bounds: ScalarBounds | None = None):
        u = U[..., 0]
        ok = np.isfinite(u)
        if bounds is not None:
            ok &= bounds.contains(u)
        return ok

    def nad_variables(self, U):
        return U

    def primitives(self, U):
        return U


@dataclass(frozen=True)
class LinearAdvection(_Scalar):
    b: float = 1.0
    kernel_id = ADVECTION_ID

    @property
    def kernel_param(self) -> float:
        return self.b

    def flux(self, U):
        return self.b * U

    def max_speed(self, U):
        return np.full(np.shape(U)[:-1], abs(self.b))


@dataclass(frozen=True)
class Burgers(_Scalar):
    kernel_id = BURGERS_ID
    kernel_param = 0.0

    def flux(self, U):
        return 0.5 * U * U

    def max_speed(self, U):
        return np.abs(U[..., 0])


def euler_pressure(U, gamma: float = 1.4):
    rho, mom, E = U[..., 0], U[..., 1], U[..., 2]
    with np.errstate(divide="ignore", invalid="ignore"):
        return (gamma - 1.0) * (E - 0.5 * mom * (mom / rho))


def _check(U, gamma):
    rho = U[..., 0]
    p = euler_pressure(U, gamma)
    if np.any(~(rho > 0)) or np.any(~(p > 0)):
        raise InadmissibleState("Euler state needs rho > 0 and p > 0")


def euler_flux(U, gamma: float = 1.4, strict: bool = False):
    """Physical flux ``(rho u, rho u^2 + p, (E + p) u)``.

    Non-finite results are returned as-is unless ``strict`` is set; the CAD
    detector catches them downstream.
    """
    U = np.asarray(U, dtype=float)
    if strict:
        _check(U, gamma)
    rho, mom, E = U[..., 0], U[..., 1], U[..., 2]
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        u = mom / rho
        p = (gamma - 1.0) * (E - 0.5 * mom * u)
        return np.stack([mom, mom * u + p, (E + p) * u], axis=-1)


def euler_max_speed(U, gamma: float = 1.4, strict: bool = True):
    """``|u| + c`` with ``c = sqrt(gamma p / rho)``."""
    U = np.asarray(U, dtype=float)
    if strict:
        _check(U, gamma)
    rho = U[..., 0]
    with np.errstate(divide="ignore", invalid="ignore"):
        u = U[..., 1] / rho
        c = np.sqrt(gamma * euler_pressure(U, gamma) / rho)
    return np.abs(u) + c


def primitive_to_conserved(rho, u, p, gamma: float = 1.4) -> np.ndarray:
    rho, u, p = np.broadcast_arrays(*(np.asarray(a, dtype=float) for a in (rho, u, p)))
    return np.stack([rho, rho * u, p / (gamma - 1.0) + 0.5 * rho * u * u], axis=-1)


@dataclass(frozen=True)
class Euler:
    gamma: float = 1.4
    M = 3
    var_names = ("rho", "u", "p")
    kernel_id = EULER_ID
    is_scalar = False

    @property
    def kernel_param(self) -> float:
        return self.gamma

    def flux(self, U):
        return euler_flux(U, self.gamma)

    def max_speed(self, U):
        return euler_max_speed(U, self.gamma, strict=False)

    def pressure(self, U):
        return euler_pressure(U, self.gamma)

    def is_admissible(self, U, bounds=None):
        with np.errstate(invalid="ignore"):
            return (U[..., 0] > 0) & (self.pressure(U) > 0)

    def nad_variables(self, U):
        return np.stack([U[..., 0], self.pressure(U)], axis=-1)

    def primitives(self, U):
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.stack([U[..., 0], U[..., 1] / U[..., 0], self.pressure(U)], axis=-1)

    def conserved(self, rho, u, p):
        return primitive_to_conserved(rho, u, p, self.gamma)


def exact_advection(u0: Callable, b: float, x, t: float, x_left: float, period: float):
    """Periodic translate ``u0(wrap(x - b t))``."""
    xs = np.mod(np.asarray(x, dtype=float) - b * t - x_left, period) + x_left
    return u0(xs)
