"""Numpy implementation of the CAT2P face-flux kernel (vectorised over faces).

Works with rescaled derivatives so no power of dt is ever formed:
``g[m] = dt^m f^(m)`` and ``v[l] = dt^l u^(l)``.  The arithmetic order matches
``_cat_kernels.pyx`` term by term, so both backends agree to the last bit when
the C compiler does not contract into FMAs.
"""
import numpy as np

from .systems import ADVECTION_ID, BURGERS_ID


def point_flux(sid, param, s):
    if sid == ADVECTION_ID:
        return param * s
    if sid == BURGERS_ID:
        return 0.5 * s * s
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        u = s[..., 1] / s[..., 0]
        p = (param - 1.0) * (s[..., 2] - 0.5 * s[..., 1] * u)
        return np.stack([s[..., 1], s[..., 1] * u + p, (s[..., 2] + p) * u], axis=-1)


def cat_fluxes(u, left_cells, sid, param, P, sigma, interp, dspace, dtime, taylor,
               inv_fact):
    n = 2 * P
    offsets = np.arange(-P + 1, P + 1)
    window = u[np.asarray(left_cells)[:, None] + offsets[None, :]]  # (faces, n, M)

    with np.errstate(over="ignore", invalid="ignore"):
        g = [point_flux(sid, param, window)]
        v = [None]
        for k in range(2, n + 1):
            prev = g[k - 2]
            acc = np.zeros_like(window)
            for r in range(n):
                acc = acc + dspace[:, r][None, :, None] * prev[:, r : r + 1, :]
            v.append(-sigma * acc)

            gk = np.zeros_like(window)
            for ri in range(n):
                s = window
                for l in range(1, k):
                    s = s + taylor[ri, l] * v[l]
                gk = gk + dtime[k - 1, ri] * point_flux(sid, param, s)
            g.append(gk)

        F = np.zeros((window.shape[0], window.shape[2]))
        for k in range(1, n + 1):
            inner = np.zeros_like(F)
            for p in range(n):
                inner = inner + interp[p] * g[k - 1][:, p, :]
            F = F + inner * inv_fact[k]
    return F
