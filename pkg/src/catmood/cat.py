"""CAT2P numerical fluxes and the conservative update."""
from __future__ import annotations

from math import factorial

import numpy as np

from . import kernels
from .mesh import Grid1D
from .weights import apply, make_face_weights, make_weights


def cat_flux_at_face(window, system, P: int, dx: float, dt: float, weights=make_weights,
                     face_weights=make_face_weights):
    """Reference CAT2P flux at the face x_{i+1/2} of one stencil.

    ``window`` holds the 2P states ``u_{i-P+1} ... u_{i+P}`` (shape ``(2P, M)``).
    This follows the recursion literally, one face at a time, with explicit
    powers of ``dt``; use :func:`cat_update_sweep` for whole grids.
    """
    window = np.asarray(window, dtype=float)
    n = 2 * P
    if window.shape[0] != n:
        raise ValueError(f"window must hold {n} states")
    nodes = range(-P + 1, P + 1)

    f_local = [system.flux(window)]           # f_local[m][j] ~ d^m/dt^m f at x_{i+j}
    u_local = [window]                        # u_local[l][j] ~ d^l/dt^l u at x_{i+j}
    for k in range(2, n + 1):
        u_local.append(np.stack([-apply(weights(P, 1, j), f_local[k - 2], dx) for j in nodes]))
        pred = np.empty((n, n) + window.shape[1:])   # [j, r]
        for ri, r in enumerate(nodes):
            taylor = window.copy()
            for l in range(1, k):
                taylor = taylor + (r * dt) ** l / factorial(l) * u_local[l]
            pred[:, ri] = system.flux(taylor)
        dtab = weights(P, k - 1, 0)
        f_local.append(np.stack([apply(dtab, pred[j], dt) for j in range(n)]))

    interp = face_weights(P)
    F = 0.0
    for k in range(1, n + 1):
        F = F + dt ** (k - 1) / factorial(k) * apply(interp, f_local[k - 1])
    return np.asarray(F)


def face_left_cells(grid: Grid1D, faces=None) -> np.ndarray:
    """Ghosted index of the cell left of each face; faces run 0..n_cells."""
    faces = np.arange(grid.n_cells + 1) if faces is None else np.asarray(faces)
    return grid.n_ghost - 1 + faces


def conservative_update(field, fluxes, grid: Grid1D, dt: float, cells=None):
    """``u_i - dt/dx (F_{i+1/2} - F_{i-1/2})`` for the interior (or listed) cells."""
    sigma = dt / grid.dx
    if cells is None:
        with np.errstate(invalid="ignore", over="ignore"):
            return field[grid.interior] - sigma * (fluxes[1:] - fluxes[:-1])
    cells = np.asarray(cells)
    with np.errstate(invalid="ignore", over="ignore"):
        return field[grid.n_ghost + cells] - sigma * (fluxes[cells + 1] - fluxes[cells])


def cat_update_sweep(field, system, P: int, grid: Grid1D, dt: float, face_mask=None,
                     fluxes=None, backend=None):
    """One CAT2P step on a ghost-filled field.

    With ``face_mask`` only the flagged faces are recomputed and the rest are
    taken from ``fluxes``.  Returns ``(new interior field, face fluxes)``.
    """
    if grid.n_ghost < P:
        raise ValueError(f"CAT{2 * P} needs at least {P} ghost cells")
    sigma = dt / grid.dx
    if face_mask is None:
        fluxes = kernels.cat_fluxes(field, face_left_cells(grid), system, P, sigma, backend)
    else:
        if fluxes is None:
            raise ValueError("face_mask requires the existing fluxes")
        fluxes = fluxes.copy()
        faces = np.flatnonzero(face_mask)
        fluxes[faces] = kernels.cat_fluxes(field, face_left_cells(grid, faces), system, P,
                                           sigma, backend)
    return conservative_update(field, fluxes, grid, dt), fluxes
