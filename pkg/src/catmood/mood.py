"""A posteriori MOOD limiting over a cascade of schemes.

Each step computes an unlimited candidate with the top scheme, runs the
detector chain CAD -> PAD -> NAD on it, demotes failing cells one rung, and
recomputes only the faces whose scheme changed.  A face uses the lower of the
two adjacent cells' schemes, so every recomputed flux enters both of its
cells with opposite signs and the splice stays conservative.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from . import kernels
from .cat import conservative_update, face_left_cells
from .loworder import first_order_fluxes
from .mesh import BoundaryCondition, Grid1D, SchemeLevel, SolverConfig
from .systems import ScalarBounds


def level_fluxes(level: SchemeLevel, u, left_cells, system, sigma: float, backend=None):
    """Face fluxes of one cascade level at the faces right of ``left_cells``."""
    if level.kind == "cat":
        return kernels.cat_fluxes(u, left_cells, system, level.P, sigma, backend)
    with np.errstate(invalid="ignore", over="ignore", divide="ignore"):
        return first_order_fluxes(u, left_cells, system, level.kind)


# --- detectors -------------------------------------------------------------

def detect_cad(candidate) -> np.ndarray:
    """True where any component of the candidate is NaN or infinite."""
    return ~np.all(np.isfinite(candidate), axis=-1)


def detect_pad(candidate, system, bounds: ScalarBounds | None = None) -> np.ndarray:
    """True where the candidate leaves the physically admissible set."""
    with np.errstate(invalid="ignore"):
        return ~system.is_admissible(candidate, bounds)


def nad_bounds(previous, P: int, n_ghost: int, system):
    """Min/max of the NAD variables over the (2P+1)-cell stencil of every
    interior cell of the ghosted ``previous`` field."""
    if n_ghost < P:
        raise ValueError("NAD stencil needs n_ghost >= P")
    vals = system.nad_variables(previous)
    n = previous.shape[0] - 2 * n_ghost
    inner = vals[n_ghost - P : n_ghost + n + P]
    win = sliding_window_view(inner, 2 * P + 1, axis=0)  # (n, nv, 2P+1)
    return win.min(axis=-1), win.max(axis=-1)


def nad_delta(lo, hi, tol1: float, tol2: float, form: str = "product"):
    if form == "product":
        return np.maximum(tol1, tol2 * (hi - lo))
    if form == "printed":
        return np.maximum(np.maximum(tol1, tol2), hi - lo)
    raise ValueError(f"unknown delta form {form!r}")


def detect_nad(previous, candidate, P: int, tol1: float, tol2: float, system,
               n_ghost: int | None = None, delta_form: str = "product") -> np.ndarray:
    """Relaxed discrete maximum principle.

    ``previous`` is the ghosted field at t^n, ``candidate`` the interior field
    at t^{n+1}.  A cell fails when a checked variable leaves
    ``[min - delta, max + delta]`` of its stencil.
    """
    if n_ghost is None:
        n_ghost = (previous.shape[0] - candidate.shape[0]) // 2
    lo, hi = nad_bounds(previous, P, n_ghost, system)
    return _nad_fail(system.nad_variables(candidate), lo, hi, tol1, tol2, delta_form)


def _nad_fail(v, lo, hi, tol1, tol2, form):
    delta = nad_delta(lo, hi, tol1, tol2, form)
    with np.errstate(invalid="ignore"):
        bad = (v < lo - delta) | (v > hi + delta)
    return np.any(bad, axis=-1)


# --- the limiting loop ------------------------------------------------------

@dataclass
class DetectionReport:
    """Per-cell verdicts (any failure during the step) and summary counts."""

    cad: np.ndarray
    pad: np.ndarray
    nad: np.ndarray
    rank: np.ndarray
    unresolved: np.ndarray
    unresolved_cad: np.ndarray
    iterations: int = 0
    demotions: int = 0
    n_cad: int = 0
    n_pad: int = 0
    n_nad: int = 0
    recomputed_faces: list = field(default_factory=list)

    @property
    def failed(self) -> np.ndarray:
        return self.cad | self.pad | self.nad

    def rank_counts(self, n_levels: int) -> list[int]:
        return np.bincount(self.rank, minlength=n_levels).tolist()


def _face_ranks(rank, bc: BoundaryCondition):
    if bc is BoundaryCondition.PERIODIC:
        ext = np.concatenate([rank[-1:], rank, rank[:1]])
    else:
        ext = np.concatenate([rank[:1], rank, rank[-1:]])
    return np.maximum(ext[:-1], ext[1:])


def mood_step(previous, system, cascade: Sequence[SchemeLevel], grid: Grid1D, dt: float,
              bc: BoundaryCondition = BoundaryCondition.PERIODIC,
              cfg: SolverConfig | None = None, bounds: ScalarBounds | None = None,
              candidate_hook: Callable | None = None, backend=None):
    """Advance the ghost-filled ``previous`` field by ``dt`` with MOOD limiting.

    Returns ``(accepted interior field, DetectionReport)``.  ``candidate_hook``
    may mutate the first unlimited candidate in place (used to inject faults).
    """
    cfg = cfg or SolverConfig(cascade=tuple(cascade))
    n, g = grid.n_cells, grid.n_ghost
    last = len(cascade) - 1
    P_nad = max(lvl.P for lvl in cascade)
    sigma = dt / grid.dx
    left = face_left_cells(grid)

    rank = np.zeros(n, dtype=int)
    face_rank = np.zeros(n + 1, dtype=int)
    fluxes = level_fluxes(cascade[0], previous, left, system, sigma, backend)
    candidate = conservative_update(previous, fluxes, grid, dt)
    if candidate_hook is not None:
        candidate_hook(candidate)

    lo, hi = nad_bounds(previous, P_nad, g, system)
    report = DetectionReport(*(np.zeros(n, dtype=bool) for _ in range(3)), rank,
                             np.zeros(n, dtype=bool), np.zeros(n, dtype=bool))
    check = np.arange(n)
    while True:
        report.iterations += 1
        cand = candidate[check]
        cad = detect_cad(cand)
        pad = ~cad & detect_pad(cand, system, bounds)
        nad = np.zeros_like(cad)
        todo = ~(cad | pad)
        if todo.any():
            idx = check[todo]
            nad[todo] = _nad_fail(system.nad_variables(cand[todo]), lo[idx], hi[idx],
                                  cfg.tol1, cfg.tol2, cfg.delta_form)
        report.cad[check] |= cad
        report.pad[check] |= pad
        report.nad[check] |= nad
        report.n_cad += int(cad.sum())
        report.n_pad += int(pad.sum())
        report.n_nad += int(nad.sum())

        failing = cad | pad | nad
        at_last = rank[check] >= last
        report.unresolved[check] = failing & at_last
        report.unresolved_cad[check] = cad & at_last
        demote = check[failing & ~at_last]
        if demote.size == 0:
            break
        rank[demote] += 1
        report.demotions += demote.size

        new_face_rank = _face_ranks(rank, bc)
        changed = np.flatnonzero(new_face_rank != face_rank)
        for r in np.unique(new_face_rank[changed]):
            faces = changed[new_face_rank[changed] == r]
            fluxes[faces] = level_fluxes(cascade[r], previous, left[faces], system, sigma,
                                         backend)
        face_rank = new_face_rank
        report.recomputed_faces.append(changed)

        touched = np.unique(np.concatenate([changed - 1, changed]))
        touched = touched[(touched >= 0) & (touched < n)]
        candidate[touched] = conservative_update(previous, fluxes, grid, dt, touched)
        # a demoted cell whose faces were already at its new rank keeps its
        # value; it must still be re-checked so it can fall further
        check = np.union1d(touched, demote)

    return candidate, report
