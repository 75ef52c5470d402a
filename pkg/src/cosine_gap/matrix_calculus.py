"""Power-series functional calculus on dense square matrices.

cos, sin and sinc are evaluated on ``X / 2**s`` (norm at most 1) and brought
back with double-angle identities. arccos uses its Taylor series around 0,
which converges for power-bounded matrices but only like ``n**-1.5`` when
the spectrum touches +-1. Norms are operator 2-norms throughout.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, PreconditionError, SeriesTruncationError

MAX_DIM = 64
MATRIX_MAX_TERMS = 500
ARCCOS_MAX_TERMS = 20_000
POWER_PROBE = 64
POWER_BOUND_LIMIT = 1e3
SPECTRAL_SLACK = 1e-10
COMMUTE_TOL = 1e-12
NILPOTENT_TOL = 1e-12
HYPOTHESIS_TOL = 1e-10


class SlowConvergenceWarning(RuntimeWarning):
    """The arccos series stopped before reaching its tolerance."""


@dataclass(frozen=True)
class SeriesOptions:
    tol: float = 1e-13
    max_terms: int | None = None  # None picks the per-function default

    def __post_init__(self):
        if not self.tol > 0:
            raise DomainError("tol must be positive")
        if self.max_terms is not None and self.max_terms < 1:
            raise DomainError("max_terms must be positive")

    def terms(self, default):
        return default if self.max_terms is None else self.max_terms


DEFAULT_OPTIONS = SeriesOptions()


@dataclass(frozen=True)
class AlphaTable:
    p: int
    coefficients: np.ndarray


@dataclass(frozen=True)
class PowerReport:
    sup_norm: float
    attained_at: int
    growing: bool


@dataclass(frozen=True)
class CancellationReport:
    case: str  # "(i)" or "(ii)"
    hypothesis_holds: bool
    equal: bool | None
    residual: float | None
    sinc_min_singular: float | None


def as_square_matrix(X):
    """Validate and return ``X`` as a float or complex 2-D square array."""
    A = np.asarray(X)
    if A.ndim == 0:
        A = A.reshape(1, 1)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {A.shape}")
    if not 1 <= A.shape[0] <= MAX_DIM:
        raise DomainError(f"dimension {A.shape[0]} outside [1, {MAX_DIM}]")
    if not np.issubdtype(A.dtype, np.complexfloating):
        A = A.astype(float)
    if not np.all(np.isfinite(A)):
        raise DomainError("matrix has non-finite entries")
    return A


def norm2(X):
    return float(np.linalg.norm(X, 2))


def _scaling(X):
    r = norm2(X)
    s = max(0, math.ceil(math.log2(r))) if r > 1.0 else 0
    return s, X / 2.0**s, r / 2.0**s


def _even_series(Y, r, first_ratio, tol, max_terms, name):
    """``sum_n c_n Y^{2n}`` with ``c_0 = 1`` and ``c_n / c_{n-1} = first_ratio(n)``."""
    eye = np.eye(Y.shape[0], dtype=Y.dtype)
    Y2 = Y @ Y
    r2 = r * r
    out = eye.copy()
    P = eye
    c = 1.0
    bound = 1.0
    for n in range(1, max_terms + 1):
        P = P @ Y2
        c *= first_ratio(n)
        out = out + c * P
        bound = abs(c) * r2**n
        # remaining terms shrink by at least 1/12 each since r <= 1
        if 2.0 * bound <= tol or bound == 0.0:
            return out
    raise SeriesTruncationError(f"{name} series hit max_terms={max_terms}", 2.0 * bound)


def _cos_ratio(n):
    return -1.0 / ((2 * n - 1) * (2 * n))


def _sinc_ratio(n):
    return -1.0 / ((2 * n) * (2 * n + 1))


def mat_cos(X, opts=DEFAULT_OPTIONS):
    """Matrix cosine by scaling, Taylor series and ``cos 2Y = 2 cos^2 Y - I``."""
    X = as_square_matrix(X)
    s, Y, r = _scaling(X)
    # each doubling can amplify the error roughly fourfold
    inner = opts.tol * 4.0**-s
    Cy = _even_series(Y, r, _cos_ratio, inner, opts.terms(MATRIX_MAX_TERMS), "cos")
    eye = np.eye(X.shape[0], dtype=Cy.dtype)
    for _ in range(s):
        Cy = 2.0 * Cy @ Cy - eye
    return Cy


def _sinc_and_cos(X, opts):
    s, Y, r = _scaling(X)
    inner = opts.tol * 4.0**-s
    terms = opts.terms(MATRIX_MAX_TERMS)
    Cy = _even_series(Y, r, _cos_ratio, inner, terms, "cos")
    Zy = _even_series(Y, r, _sinc_ratio, inner, terms, "sinc")
    eye = np.eye(X.shape[0], dtype=Cy.dtype)
    for _ in range(s):
        # sinc(2Y) = sinc(Y) cos(Y)
        Zy = Zy @ Cy
        Cy = 2.0 * Cy @ Cy - eye
    return Zy, Cy


def mat_sinc(X, opts=DEFAULT_OPTIONS):
    """Matrix ``sinc``: the entire function with ``X sinc(X) = sin(X)``."""
    X = as_square_matrix(X)
    return _sinc_and_cos(X, opts)[0]


def mat_sin(X, opts=DEFAULT_OPTIONS):
    X = as_square_matrix(X)
    return X @ _sinc_and_cos(X, opts)[0]


def arccos_coefficients(n_terms):
    """``c_n = (2n)! / (4^n (2n+1) (n!)^2)`` for ``n < n_terms``.

    Built from ``c_{n+1} = c_n (2n+1)^2 / ((2n+2)(2n+3))``.
    """
    n = np.arange(n_terms - 1, dtype=float)
    ratios = (2 * n + 1) ** 2 / ((2 * n + 2) * (2 * n + 3))
    return np.concatenate(([1.0], np.cumprod(ratios)))


def coefficient_partial_sums(terms):
    """Running partial sums ``sum_{n<k} c_n`` for ``k = 1..terms``."""
    if terms < 1:
        raise DomainError("terms must be at least 1")
    return np.cumsum(arccos_coefficients(terms))


def coefficient_sum_check(terms):
    """Partial sum of the arccos coefficients; tends to ``pi / 2`` from below."""
    if terms < 1:
        raise DomainError("terms must be at least 1")
    return math.fsum(arccos_coefficients(terms))


def _power_norms(X, count):
    norms = np.empty(count + 1)
    norms[0] = 1.0
    P = np.eye(X.shape[0], dtype=X.dtype)
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(1, count + 1):
            P = P @ X
            norms[k] = norm2(P) if np.all(np.isfinite(P)) else np.inf
    return norms


def spectral_radius(X):
    return float(np.max(np.abs(np.linalg.eigvals(X))))


def arccos_precondition(X):
    """Check the power-boundedness proxy; returns ``(M, spectral_radius, norms)``."""
    X = as_square_matrix(X)
    rho = spectral_radius(X)
    norms = _power_norms(X, POWER_PROBE)
    M = float(np.max(norms[1:]))
    if rho > 1.0 + SPECTRAL_SLACK:
        raise PreconditionError(f"spectral radius {rho:.6g} exceeds 1; arccos series diverges")
    if not M <= POWER_BOUND_LIMIT:
        raise PreconditionError(
            f"powers reach norm {M:.3g} within {POWER_PROBE} steps; not power-bounded")
    return M, rho, norms


def _geometric_tail(norms):
    """Best ``(K, rho, j)`` with ``||X^{2n+1}|| <= K rho^(n-j+1)`` for all n."""
    best = None
    for j in range(1, POWER_PROBE // 2 + 1):
        nu = norms[2 * j]
        if nu >= 1.0:
            continue
        rho = nu ** (1.0 / j)
        K = float(np.max(norms[1:2 * j:2]))
        if best is None or rho < best[1]:
            best = (K, rho, j)
    return best


def mat_arccos(X, opts=DEFAULT_OPTIONS, full_output=False):
    """``arccos(X) = pi/2 I - sum_n c_n X^(2n+1)`` for power-bounded ``X``.

    Truncation stops once a rigorous bound on the neglected tail is below
    ``opts.tol``. Two tail bounds are tracked: ``M * sum_{n>N} c_n`` (always
    valid) and a geometric bound built from a probed power ``||X^(2j)|| < 1``.
    If ``max_terms`` runs out first, a :class:`SlowConvergenceWarning` is
    issued and the bound actually achieved is reported in the info dict.
    """
    X = as_square_matrix(X)
    M, rho, norms = arccos_precondition(X)
    max_terms = opts.terms(ARCCOS_MAX_TERMS)
    geo = _geometric_tail(norms)
    eye = np.eye(X.shape[0], dtype=X.dtype)
    X2 = X @ X
    P = X.copy()
    S = X.copy()
    c = 1.0
    partial = 1.0
    half_pi = math.pi / 2.0
    bound = math.inf
    n = 0
    for n in range(1, max_terms + 1):
        c_next = c * (2 * n - 1) ** 2 / ((2 * n) * (2 * n + 1))
        # bound on the tail sum_{k >= n} c_k ||X^(2k+1)||
        bound = M * max(half_pi - partial, 0.0)
        if geo is not None:
            K, r, j = geo
            if r == 0.0:
                bound = 0.0
            else:
                bound = min(bound, K * r ** (1 - j) * c_next * r**n / (1.0 - r))
        if bound <= opts.tol:
            break
        c = c_next
        P = P @ X2
        S = S + c * P
        partial += c
    else:
        bound = M * max(half_pi - partial, 0.0)
        if geo is not None and geo[1] > 0.0:
            K, r, j = geo
            c_next = c * (2 * n + 1) ** 2 / ((2 * n + 2) * (2 * n + 3))
            bound = min(bound, K * r ** (1 - j) * c_next * r ** (n + 1) / (1.0 - r))
    Y = half_pi * eye - S
    converged = bool(bound <= opts.tol)
    if not converged:
        warnings.warn(
            f"arccos series stopped after {n} terms with tail bound {bound:.3e}",
            SlowConvergenceWarning, stacklevel=2)
    if not full_output:
        return Y
    info = {
        "terms": n,
        "residual_bound": float(bound),
        "converged": converged,
        "power_bound": M,
        "spectral_radius": rho,
        "slow_convergence": bool(rho >= 1.0 - 1e-6),
    }
    return Y, info


def alpha_coefficients(p, exact=False):
    """Coefficients of ``c_1^p = sum_k alpha_{k,p} c_k`` for a cosine sequence.

    Built by the recursion obtained from ``c_1 c_k = (c_{k-1} + c_{k+1}) / 2``
    (``c_1 c_0 = c_1``). With ``exact=True`` the table holds Fractions.
    """
    from fractions import Fraction

    if int(p) != p or not 1 <= p <= 10**4:
        raise DomainError("p must be an integer in [1, 10000]")
    one, half = (Fraction(1), Fraction(1, 2)) if exact else (1.0, 0.5)
    dtype = object if exact else float
    alpha = np.array([0 * one, one], dtype=dtype)
    for k in range(1, int(p)):
        nxt = np.zeros(k + 2, dtype=dtype)
        if exact:
            nxt[:] = 0 * one
        nxt[1:] += alpha * half  # alpha_{k-1} contributes to k
        nxt[:-2] += alpha[1:] * half  # alpha_{k+1} contributes to k
        nxt[1] += alpha[0] * half  # c_1 c_0 = c_1 counts in full
        alpha = nxt
    return AlphaTable(int(p), alpha)


def alpha_closed_form(p):
    """Binomial closed form of the alpha table, in exact rationals."""
    from fractions import Fraction

    out = [Fraction(0)] * (p + 1)
    for k in range(p % 2, p + 1, 2):
        if k == 0:
            out[0] = Fraction(math.comb(p, p // 2), 2**p)
        else:
            out[k] = Fraction(math.comb(p, (p - k) // 2), 2 ** (p - 1))
    return out


def power_boundedness(X, p_max=256):
    """Probe ``max_{1<=p<=p_max} ||X^p||``.

    ``growing`` is set when the norms still increase strictly over the last
    10% of the range, or when the powers overflow.
    """
    X = as_square_matrix(X)
    if int(p_max) != p_max or not 1 <= p_max <= 10**4:
        raise DomainError("p_max must be an integer in [1, 10000]")
    norms = _power_norms(X, int(p_max))[1:]
    finite = np.isfinite(norms)
    if not np.all(finite):
        last = int(np.argmin(finite))
        sup = float(np.max(norms[:last])) if last else math.inf
        return PowerReport(sup, last, True)
    k = int(np.argmax(norms))
    tail = norms[-max(2, math.ceil(0.1 * p_max)):]
    growing = bool(len(tail) > 1 and np.all(np.diff(tail) > 0.0))
    return PowerReport(float(norms[k]), k + 1, growing)


def chebyshev_sequence(c1, count):
    """``[T_n(c1)]`` for ``n = 0..count`` via ``c_{n+1} = 2 c_1 c_n - c_{n-1}``."""
    c1 = as_square_matrix(c1)
    seq = [np.eye(c1.shape[0], dtype=c1.dtype), c1.copy()]
    for _ in range(1, count):
        seq.append(2.0 * c1 @ seq[-1] - seq[-2])
    return seq[: count + 1]


def reconstruct_sequence(c1, count, opts=DEFAULT_OPTIONS):
    """``[cos(n arccos(c1))]`` for ``n = 0..count``.

    When the spectrum of ``c1`` touches +-1 the arccos series cannot reach
    ``opts.tol``; the sequence is then produced by the three-term recurrence,
    which is the same function ``cos(n arccos x) = T_n(x)`` evaluated without
    the series.
    """
    c1 = as_square_matrix(c1)
    if count < 0:
        raise DomainError("count must be nonnegative")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", SlowConvergenceWarning)
        Y, info = mat_arccos(c1, opts, full_output=True)
    if not info["converged"]:
        return chebyshev_sequence(c1, count)
    return [mat_cos(n * Y, opts) for n in range(count + 1)]


def _in_pi_z(lam):
    k = round(lam / math.pi)
    return abs(lam - k * math.pi) <= 1e-12 * max(1.0, abs(lam))


def nilpotent_cancellation_check(x, y, lam, opts=DEFAULT_OPTIONS):
    """Check the cancellation law for commuting nilpotent ``x``, ``y``.

    If ``cos(lam I + x) = cos(lam I + y)`` then ``x = y`` when ``lam`` is not
    in ``pi Z`` and ``x^2 = y^2`` when it is. The invertibility of the sinc
    factors that drives the argument is measured by smallest singular value.
    """
    x, y = as_square_matrix(x), as_square_matrix(y)
    if x.shape != y.shape:
        raise DomainError("x and y must have the same shape")
    n = x.shape[0]
    if norm2(x @ y - y @ x) > COMMUTE_TOL:
        raise PreconditionError("x and y do not commute")
    for name, z in (("x", x), ("y", y)):
        if norm2(np.linalg.matrix_power(z, n)) > NILPOTENT_TOL:
            raise PreconditionError(f"{name} is not nilpotent")
    case = "(ii)" if _in_pi_z(lam) else "(i)"
    eye = np.eye(n)
    gap = norm2(mat_cos(lam * eye + x, opts) - mat_cos(lam * eye + y, opts))
    if gap > HYPOTHESIS_TOL:
        return CancellationReport(case, False, None, None, None)

    def smin(Z):
        return float(np.linalg.svd(mat_sinc(Z, opts), compute_uv=False)[-1])

    sig = smin((y - x) / 2.0)
    if case == "(i)":
        residual = norm2(x - y)
    else:
        sig = min(sig, smin((x + y) / 2.0))
        residual = norm2(x @ x - y @ y)
    return CancellationReport(case, True, residual <= HYPOTHESIS_TOL, residual, sig)
