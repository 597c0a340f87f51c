"""Interpolatory differentiation weights on the 2P-point stencil.

For nodes ``j = -P+1, ..., P`` (in units of the spacing ``h``) the table
``gamma`` satisfies::

    f^(k)(x_i + q h) ~= h^-k * sum_j gamma_j f(x_i + j h)

and is exact for polynomials of degree ``<= 2P - 1``.  ``k = 0`` is Lagrange
interpolation.  The same tables serve spatial (``h = dx``) and temporal
(``h = dt``) differentiation.

The face combination of the CAT flux uses :func:`make_face_weights` instead:
the values are treated as cell averages of a function whose point value at the
face is returned.  Differencing those face values reproduces the centred
(2P+1)-point derivative of order 2P; plain Lagrange interpolation to the face
would cap the scheme at second order.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

import numpy as np

from .errors import DerivativeOrderTooHigh


@dataclass(frozen=True)
class WeightTable:
    P: int
    k: int
    q: Fraction
    gamma: np.ndarray
    exact: tuple[Fraction, ...]
    kind: str = "point"

    @property
    def nodes(self) -> np.ndarray:
        return np.arange(-self.P + 1, self.P + 1)


def _as_fraction(q) -> Fraction:
    if isinstance(q, Fraction):
        return q
    if isinstance(q, float):
        return Fraction(q).limit_denominator(10**6)
    return Fraction(q)


def _solve_exact(a: list[list[Fraction]], b: list[Fraction]) -> list[Fraction]:
    n = len(b)
    m = [row[:] + [rhs] for row, rhs in zip(a, b)]
    for col in range(n):
        piv = next(r for r in range(col, n) if m[r][col] != 0)
        m[col], m[piv] = m[piv], m[col]
        inv = 1 / m[col][col]
        m[col] = [v * inv for v in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                fac = m[r][col]
                m[r] = [vr - fac * vc for vr, vc in zip(m[r], m[col])]
    return [m[r][n] for r in range(n)]


@functools.lru_cache(maxsize=None)
def _cached(P: int, k: int, q: Fraction) -> WeightTable:
    nodes = range(-P + 1, P + 1)
    # moment conditions: sum_j gamma_j j^s = d^k/dx^k x^s at x = q, s < 2P
    a = [[Fraction(j) ** s for j in nodes] for s in range(2 * P)]
    b = [
        Fraction(factorial(s), factorial(s - k)) * q ** (s - k) if s >= k else Fraction(0)
        for s in range(2 * P)
    ]
    exact = tuple(_solve_exact(a, b))
    gamma = np.array([float(g) for g in exact])
    gamma.setflags(write=False)
    return WeightTable(P, k, q, gamma, exact)


def make_weights(P: int, k: int, q=0) -> WeightTable:
    """Return (cached) weights for the ``k``-th derivative at offset ``q``."""
    if P < 1:
        raise ValueError("P must be a positive integer")
    if k < 0:
        raise ValueError("k must be non-negative")
    if k >= 2 * P:
        raise DerivativeOrderTooHigh(f"k={k} needs more than {2 * P} nodes")
    return _cached(int(P), int(k), _as_fraction(q))


@functools.lru_cache(maxsize=None)
def make_face_weights(P: int) -> WeightTable:
    """Weights ``w`` with ``sum_j w_j avg_j(g) = g(x_{i+1/2})`` for every
    polynomial ``g`` of degree ``<= 2P - 1``, ``avg_j`` being the mean over
    cell ``j``."""
    if P < 1:
        raise ValueError("P must be a positive integer")
    nodes = range(-P + 1, P + 1)
    half = Fraction(1, 2)
    a = [[((j + half) ** (s + 1) - (j - half) ** (s + 1)) / (s + 1) for j in nodes]
         for s in range(2 * P)]
    b = [half**s for s in range(2 * P)]
    exact = tuple(_solve_exact(a, b))
    gamma = np.array([float(g) for g in exact])
    gamma.setflags(write=False)
    return WeightTable(P, 0, half, gamma, exact, kind="average")


def apply(table: WeightTable, values, h: float = 1.0):
    """``sum_j gamma_j values_j / h^k``; ``values`` has the node axis first."""
    values = np.asarray(values, dtype=float)
    acc = np.zeros(values.shape[1:])
    for g, v in zip(table.gamma, values):
        acc = acc + g * v
    if table.k:
        acc = acc / h**table.k
    return acc if acc.ndim else float(acc)


@dataclass(frozen=True)
class CatTables:
    """All tables one CAT2P flux evaluation needs, as dense float arrays.

    ``interp[p]``     face combination (:func:`make_face_weights`)
    ``dspace[j, r]``  first derivative at node j from nodes r
    ``dtime[m, r]``   m-th time derivative at r=0 from time nodes r (row 0 unused)
    ``taylor[r, l]``  r^l / l!
    ``inv_fact[k]``   1 / k!  (index 0 unused)
    """

    P: int
    interp: np.ndarray
    dspace: np.ndarray
    dtime: np.ndarray
    taylor: np.ndarray
    inv_fact: np.ndarray


@functools.lru_cache(maxsize=None)
def cat_tables(P: int) -> CatTables:
    n = 2 * P
    nodes = range(-P + 1, P + 1)
    interp = make_face_weights(P).gamma.copy()
    dspace = np.array([make_weights(P, 1, j).gamma for j in nodes])
    dtime = np.zeros((n, n))
    for m in range(1, n):
        dtime[m] = make_weights(P, m, 0).gamma
    taylor = np.array([[float(Fraction(r) ** l / factorial(l)) for l in range(n)]
                       for r in nodes])
    inv_fact = np.array([0.0] + [1.0 / factorial(k) for k in range(1, n + 1)])
    for arr in (interp, dspace, dtime, taylor, inv_fact):
        arr.setflags(write=False)
    return CatTables(P, interp, dspace, dtime, taylor, inv_fact)
