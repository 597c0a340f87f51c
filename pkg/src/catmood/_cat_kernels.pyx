# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled CAT2P face-flux kernel; mirrors ``_cat_kernels_py.cat_fluxes``."""
import numpy as np

cdef enum:
    MAXN = 16
    MAXM = 3


cdef inline void point_flux(int sid, double param, const double* s,
                            double* out) noexcept nogil:
    cdef double u, p
    if sid == 0:
        out[0] = param * s[0]
    elif sid == 1:
        out[0] = 0.5 * s[0] * s[0]
    else:
        u = s[1] / s[0]
        p = (param - 1.0) * (s[2] - 0.5 * s[1] * u)
        out[0] = s[1]
        out[1] = s[1] * u + p
        out[2] = (s[2] + p) * u


def cat_fluxes(const double[:, ::1] u, const Py_ssize_t[::1] left_cells, int sid,
               double param, int P, double sigma, const double[::1] interp,
               const double[:, ::1] dspace, const double[:, ::1] dtime,
               const double[:, ::1] taylor, const double[::1] inv_fact):
    cdef Py_ssize_t nf = left_cells.shape[0]
    cdef int M = u.shape[1]
    cdef int n = 2 * P
    if n > MAXN or M > MAXM:
        raise ValueError(f"kernel supports P <= {MAXN // 2} and M <= {MAXM}")

    out_arr = np.empty((nf, M))
    cdef double[:, ::1] out = out_arr
    cdef double g[MAXN][MAXN][MAXM]
    cdef double v[MAXN][MAXN][MAXM]
    cdef double ds[MAXN][MAXN]
    cdef double dt_[MAXN][MAXN]
    cdef double tay[MAXN][MAXN]
    cdef double w[MAXN]
    cdef double ifact[MAXN + 1]
    cdef double s[MAXM]
    cdef double fo[MAXM]
    cdef double acc, inner, F, cr
    cdef Py_ssize_t f, c, base
    cdef int j, r, k, l, m, p

    for j in range(n):
        w[j] = interp[j]
        for r in range(n):
            ds[j][r] = dspace[j, r]
            dt_[j][r] = dtime[j, r]
            tay[j][r] = taylor[j, r]
    for k in range(n + 1):
        ifact[k] = inv_fact[k]

    with nogil:
        for f in range(nf):
            c = left_cells[f]
            base = c - P + 1
            for j in range(n):
                point_flux(sid, param, &u[base + j, 0], g[0][j])
            for k in range(2, n + 1):
                for j in range(n):
                    for m in range(M):
                        acc = 0.0
                        for r in range(n):
                            acc = acc + ds[j][r] * g[k - 2][r][m]
                        v[k - 1][j][m] = -sigma * acc
                for j in range(n):
                    for m in range(M):
                        g[k - 1][j][m] = 0.0
                    for r in range(n):
                        for m in range(M):
                            s[m] = u[base + j, m]
                            for l in range(1, k):
                                s[m] = s[m] + tay[r][l] * v[l][j][m]
                        point_flux(sid, param, s, fo)
                        cr = dt_[k - 1][r]
                        for m in range(M):
                            g[k - 1][j][m] = g[k - 1][j][m] + cr * fo[m]
            for m in range(M):
                F = 0.0
                for k in range(1, n + 1):
                    inner = 0.0
                    for p in range(n):
                        inner = inner + w[p] * g[k - 1][p][m]
                    F = F + inner * ifact[k]
                out[f, m] = F
    return out_arr
