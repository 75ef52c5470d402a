"""Exact sup-distance between ``cos(pt)`` and ``cos(qt)`` for integer p, q.

With ``u = cos t`` we have ``cos(nt) = T_n(u)``, so

    sup_t |cos(pt) - cos(qt)| = max_{u in [-1, 1]} |T_p(u) - T_q(u)|.

The maximum sits either at ``u = +-1`` or at a root of the derivative
``p U_{p-1} - q U_{q-1}``. Roots are bracketed on the Chebyshev extrema
grid and polished by bisection; the bracket count is cross-checked against
the colleague-matrix roots of the same derivative.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import chebyshev as C
from scipy.optimize import minimize_scalar

from .errors import DomainError

MAX_DEGREE = 99
ROOT_XTOL = 1e-14
_DOMAIN_SLACK = 1e-12


@dataclass(frozen=True)
class ChebPair:
    p: int
    q: int

    def __post_init__(self):
        for name, n in (("p", self.p), ("q", self.q)):
            if int(n) != n or n < 1:
                raise DomainError(f"{name} must be a positive integer, got {n!r}")
            if n > MAX_DEGREE:
                raise DomainError(f"{name}={n} exceeds the degree cap {MAX_DEGREE}")


@dataclass(frozen=True)
class ExtremumResult:
    value: float
    u_star: float
    t_star: float
    certified: bool


def cheb_eval(n, u):
    """Evaluate the Chebyshev polynomial ``T_n`` at ``u`` in [-1, 1].

    Uses the three-term recurrence ``T_{k+1} = 2u T_k - T_{k-1}``.

    >>> cheb_eval(3, 0.5)
    -1.0
    """
    if int(n) != n or n < 0:
        raise DomainError(f"degree must be a nonnegative integer, got {n!r}")
    u = float(u)
    if not abs(u) <= 1.0 + _DOMAIN_SLACK:
        raise DomainError(f"u={u!r} lies outside [-1, 1]")
    u = min(1.0, max(-1.0, u))
    return float(_cheb_t(int(n), u))


def _cheb_t(n, u):
    # works elementwise on scalars and arrays
    if n == 0:
        return np.ones_like(u, dtype=float) if isinstance(u, np.ndarray) else 1.0
    prev, cur = (np.ones_like(u, dtype=float) if isinstance(u, np.ndarray) else 1.0), u
    for _ in range(n - 1):
        prev, cur = cur, 2.0 * u * cur - prev
    return cur


def _cheb_u(n, u):
    """Chebyshev polynomial of the second kind ``U_n``."""
    one = np.ones_like(u, dtype=float) if isinstance(u, np.ndarray) else 1.0
    if n == 0:
        return one
    prev, cur = one, 2.0 * u
    for _ in range(n - 1):
        prev, cur = cur, 2.0 * u * cur - prev
    return cur


def _difference(p, q, u):
    return _cheb_t(p, u) - _cheb_t(q, u)


def _derivative(p, q, u):
    # T_n' = n U_{n-1}
    return p * _cheb_u(p - 1, u) - q * _cheb_u(q - 1, u)


def _bisect(p, q, lo, hi, flo):
    """Vectorised bisection of the derivative over many brackets at once."""
    lo, hi = lo.copy(), hi.copy()
    positive = flo > 0.0
    while np.any(hi - lo > ROOT_XTOL):
        mid = 0.5 * (lo + hi)
        fmid = _derivative(p, q, mid)
        same = (fmid > 0.0) == positive
        lo = np.where(same, mid, lo)
        hi = np.where(same, hi, mid)
        exact = fmid == 0.0
        lo[exact] = hi[exact] = mid[exact]
    return 0.5 * (lo + hi)


def _bracketed_roots(p, q):
    n = 8 * max(p, q)
    grid = np.cos(np.pi * np.arange(n, -1, -1) / n)  # ascending from -1 to 1
    grid[0], grid[-1] = -1.0, 1.0
    vals = _derivative(p, q, grid)
    on_grid = grid[1:-1][vals[1:-1] == 0.0]
    a, b = vals[:-1], vals[1:]
    change = (a != 0.0) & (b != 0.0) & ((a > 0.0) != (b > 0.0))
    polished = _bisect(p, q, grid[:-1][change], grid[1:][change], a[change])
    return sorted(float(r) for r in np.concatenate([on_grid, polished]))


def _colleague_root_count(p, q):
    coef = np.zeros(max(p, q) + 1)
    coef[p] += 1.0
    coef[q] -= 1.0
    dcoef = C.chebtrim(C.chebder(coef), tol=0)
    if len(dcoef) <= 1:
        return 0
    r = C.chebroots(dcoef)
    real = r[np.abs(r.imag) < 1e-7].real
    inside = np.sort(real[(real > -1.0 + 1e-12) & (real < 1.0 - 1e-12)])
    if inside.size == 0:
        return 0
    # numerically doubled roots show up as near-equal pairs
    return 1 + int(np.count_nonzero(np.diff(inside) > 1e-6))


def _dense_fallback(p, q):
    """Grid over t in [0, pi] plus local Brent refinement of the best cells."""
    n = 4096 * max(p, q)
    t = np.linspace(0.0, np.pi, n + 1)
    vals = np.abs(np.cos(p * t) - np.cos(q * t))
    h = t[1] - t[0]
    best = []
    for i in np.argsort(vals)[-8:]:
        lo, hi = max(0.0, t[i] - h), min(np.pi, t[i] + h)
        res = minimize_scalar(lambda s: -abs(math.cos(p * s) - math.cos(q * s)),
                              bounds=(lo, hi), method="bounded",
                              options={"xatol": 1e-13})
        best.append((float(-res.fun), float(res.x)))
        best.append((float(vals[i]), float(t[i])))
    return best


def sup_cheb_distance(pair, q=None):
    """Return ``max_{u in [-1,1]} |T_p(u) - T_q(u)|`` with its argmax.

    Accepts a :class:`ChebPair` or two integers. The result is symmetric in
    ``p`` and ``q`` bit for bit, because the computation is canonicalised
    on ``(min, max)``.
    """
    if q is not None:
        pair = ChebPair(pair, q)
    elif not isinstance(pair, ChebPair):
        pair = ChebPair(*pair)
    lo, hi = sorted((int(pair.p), int(pair.q)))
    if lo == hi:
        return ExtremumResult(0.0, 1.0, 0.0, True)

    roots = _bracketed_roots(lo, hi)
    certified = len(roots) == _colleague_root_count(lo, hi)
    candidates = [-1.0] + roots + [1.0]
    best_val, best_u = -1.0, 1.0
    for u in candidates:
        v = abs(_difference(lo, hi, u))
        # the tolerance keeps ties (e.g. +-1/sqrt(3)) on the first candidate
        if v > best_val + 4 * np.finfo(float).eps:
            best_val, best_u = v, u
    if not certified:
        for v, t in _dense_fallback(lo, hi):
            if v > best_val + 4 * np.finfo(float).eps:
                best_val, best_u = v, math.cos(t)
    value = min(2.0, float(best_val))
    return ExtremumResult(value, float(best_u), math.acos(best_u), certified)
