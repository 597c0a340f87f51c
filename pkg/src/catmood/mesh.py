"""Uniform grid, ghost layers, boundary conditions and solver configuration."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import NonFiniteWaveSpeed


class BoundaryCondition(enum.Enum):
    PERIODIC = "periodic"
    FREE = "free"


@dataclass(frozen=True)
class SchemeLevel:
    """One rung of the MOOD cascade.

    ``kind`` is ``"cat"`` (with half-stencil ``P``, order ``2P``), ``"rusanov"``
    or ``"hll"``.  First-order levels carry ``P = 0``.
    """

    kind: str
    P: int = 0

    def __post_init__(self):
        if self.kind == "cat":
            if self.P < 1:
                raise ValueError("CAT level needs P >= 1")
        elif self.kind in ("rusanov", "hll"):
            if self.P != 0:
                raise ValueError("first-order levels take P = 0")
        else:
            raise ValueError(f"unknown scheme kind {self.kind!r}")

    @property
    def order(self) -> int:
        return 2 * self.P if self.kind == "cat" else 1

    @property
    def is_first_order(self) -> bool:
        return self.kind != "cat"

    @property
    def name(self) -> str:
        return f"CAT{2 * self.P}" if self.kind == "cat" else self.kind.upper()


CAT2 = SchemeLevel("cat", 1)
CAT4 = SchemeLevel("cat", 2)
CAT6 = SchemeLevel("cat", 3)
RUSANOV = SchemeLevel("rusanov")
HLL = SchemeLevel("hll")


@dataclass(frozen=True)
class Grid1D:
    """Uniform cell-centred mesh on ``[x_left, x_right]`` with ``n_ghost``
    ghost cells on each side."""

    x_left: float
    x_right: float
    n_cells: int
    n_ghost: int = 3

    def __post_init__(self):
        if self.n_cells < 1:
            raise ValueError("n_cells must be positive")
        if not self.x_right > self.x_left:
            raise ValueError("x_right must exceed x_left")
        if self.n_ghost < 0:
            raise ValueError("n_ghost must be non-negative")

    @property
    def dx(self) -> float:
        return (self.x_right - self.x_left) / self.n_cells

    @property
    def length(self) -> float:
        return self.x_right - self.x_left

    @property
    def centers(self) -> np.ndarray:
        return self.x_left + (np.arange(self.n_cells) + 0.5) * self.dx

    @property
    def interior(self) -> slice:
        return slice(self.n_ghost, self.n_ghost + self.n_cells)

    def with_ghosts(self, values: np.ndarray) -> np.ndarray:
        """Embed interior values (shape ``(n_cells, M)``) in a ghosted array."""
        values = np.asarray(values, dtype=float)
        out = np.empty((self.n_cells + 2 * self.n_ghost,) + values.shape[1:])
        out[self.interior] = values
        return out


@dataclass(frozen=True)
class SolverConfig:
    cfl: float = 0.9
    t_final: float = 1.0
    cascade: tuple[SchemeLevel, ...] = (CAT6, CAT2, RUSANOV)
    tol1: float = 1e-4
    tol2: float = 1e-3
    delta_form: str = "product"
    diverged_fraction: float = 0.5
    snapshot_times: tuple[float, ...] = field(default=())

    def __post_init__(self):
        if not 0.0 < self.cfl <= 1.0:
            raise ValueError("cfl must lie in (0, 1]")
        if self.t_final < 0.0:
            raise ValueError("t_final must be non-negative")
        if not self.cascade or not self.cascade[-1].is_first_order:
            raise ValueError("cascade must end with a first-order level")
        orders = [lvl.order for lvl in self.cascade]
        if any(a <= b for a, b in zip(orders, orders[1:])):
            raise ValueError("cascade must be strictly order-decreasing")
        if self.delta_form not in ("product", "printed"):
            raise ValueError("delta_form must be 'product' or 'printed'")

    @property
    def max_P(self) -> int:
        return max(lvl.P for lvl in self.cascade)


def fill_ghosts(field: np.ndarray, grid: Grid1D, bc: BoundaryCondition) -> np.ndarray:
    """Populate the ghost layers of ``field`` in place and return it."""
    g, n = grid.n_ghost, grid.n_cells
    if g == 0:
        return field
    if bc is BoundaryCondition.PERIODIC:
        if g > n:
            raise ValueError("periodic ghost layer wider than the domain")
        field[:g] = field[n : n + g]
        field[g + n :] = field[g : 2 * g]
    else:
        field[:g] = field[g]
        field[g + n :] = field[g + n - 1]
    return field


def compute_dt(field, system, grid: Grid1D, cfg: SolverConfig, t_now: float,
               t_stop: float | None = None) -> float:
    """CFL time step from the interior cells, clipped so we land on ``t_stop``
    (defaults to ``cfg.t_final``)."""
    t_stop = cfg.t_final if t_stop is None else t_stop
    remaining = t_stop - t_now
    interior = field[grid.interior] if field.shape[0] != grid.n_cells else field
    lam = float(np.max(system.max_speed(interior)))
    if not np.isfinite(lam):
        raise NonFiniteWaveSpeed(f"max wave speed is {lam}")
    if lam <= 0.0:
        return remaining
    return min(cfg.cfl * grid.dx / lam, remaining)


def scheme_cascade(names: Sequence[str]) -> tuple[SchemeLevel, ...]:
    lookup = {"cat2": CAT2, "cat4": CAT4, "cat6": CAT6, "rusanov": RUSANOV, "hll": HLL}
    return tuple(lookup[n.lower()] for n in names)
