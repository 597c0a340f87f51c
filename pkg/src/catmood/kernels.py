"""Backend selection for the CAT hot loop.

The compiled kernel is used when it was built; otherwise the numpy version.
Set ``CATMOOD_BACKEND=python`` to force the fallback.
"""
import os

import numpy as np

from . import _cat_kernels_py
from .weights import cat_tables

try:
    from . import _cat_kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

_IMPLS = {"python": _cat_kernels_py.cat_fluxes}
if _compiled is not None:
    _IMPLS["cython"] = _compiled.cat_fluxes

BACKEND = os.environ.get("CATMOOD_BACKEND", "cython" if _compiled else "python")
if BACKEND not in _IMPLS:
    BACKEND = "python"


def available_backends():
    return sorted(_IMPLS)


def set_backend(name):
    global BACKEND
    if name not in _IMPLS:
        raise ValueError(f"backend {name!r} not available; have {available_backends()}")
    BACKEND = name


def cat_fluxes(u, left_cells, system, P, sigma, backend=None):
    """CAT2P fluxes at the faces to the right of ``left_cells``.

    ``u`` is the ghosted ``(cells, M)`` state; ``sigma = dt/dx``.  Returns an
    array of shape ``(len(left_cells), M)``.
    """
    t = cat_tables(P)
    impl = _IMPLS[backend or BACKEND]
    u = np.ascontiguousarray(u, dtype=float)
    left_cells = np.ascontiguousarray(left_cells, dtype=np.intp)
    if left_cells.size == 0:
        return np.empty((0, u.shape[1]))
    if left_cells.min() < P - 1 or left_cells.max() + P >= u.shape[0]:
        raise IndexError("CAT stencil runs past the ghost layers")
    return np.asarray(impl(u, left_cells, system.kernel_id, float(system.kernel_param), P,
                           float(sigma), t.interp, t.dspace, t.dtime, t.taylor, t.inv_fact))
