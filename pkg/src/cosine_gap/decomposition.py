"""Spectral decomposition of matrix cosine families ``t -> cos(tA)``.

A cosine family only sees ``A^2`` (cos is even), so frequencies come from
the spectrum of ``A^2``: each eigenvalue ``mu_j >= 0`` contributes the
frequency ``b_j = sqrt(mu_j)`` and its spectral idempotent ``P_j``, and

    cos(tA) = sum_j cos(b_j t) P_j.

If ``A^2`` is defective, or has a negative or non-real eigenvalue, the
family is unbounded.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import reduce

import numpy as np
from scipy.optimize import minimize_scalar

from .chebyshev import MAX_DEGREE, sup_cheb_distance
from .errors import (
    BudgetError,
    ConsistencyError,
    HypothesisNotMetError,
    IllSeparatedSpectrumError,
    NotDiagonalizableError,
    UnboundedFamilyError,
)
from .kronecker import running_sup
from .matrix_calculus import DEFAULT_OPTIONS, as_square_matrix, mat_cos, norm2
from .omega import (
    IRRATIONAL,
    MEMBERSHIP_TOL,
    OPTIMAL_CONSTANT,
    RATIONAL_ODD_ODD,
    RationalFrequency,
    DistanceReport,
    classify_ratio,
    enumerate_omega,
    scalar_distance,
)

MERGE_TOL = 1e-10
SEPARATION_TOL = 1e-8
IDEMPOTENT_TOL = 1e-9
RESIDUAL_TOL = 1e-8
MEMBERSHIP_SLACK = 1e-9
GRID_POINTS = 10**5
REFINE_XTOL = 1e-10
RESIDUAL_POINTS = 10**3
MAX_PERIOD_MULTIPLE = 10**4


@dataclass(frozen=True)
class CosineFamily:
    """The cosine family ``t -> cos(tA)`` of a square generator ``A``."""

    generator: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "generator", as_square_matrix(self.generator))

    @property
    def dim(self):
        return self.generator.shape[0]

    def __call__(self, t, opts=DEFAULT_OPTIONS):
        return family_eval(self, t, opts)


@dataclass
class Decomposition:
    k: int
    frequencies: list
    projections: list
    residual: float
    distance: float
    omega_budget: float
    omega: list = field(default_factory=list)
    omega_complete: bool = True  # False: only the certified frequencies are listed

    def to_dict(self):
        def mat(P):
            if np.iscomplexobj(P):
                return {"real": P.real.tolist(), "imag": P.imag.tolist()}
            return P.tolist()

        return {
            "k": self.k,
            "frequencies": [float(b) for b in self.frequencies],
            "projections": [mat(P) for P in self.projections],
            "residual": float(self.residual),
            "distance": float(self.distance),
            "omega_budget": float(self.omega_budget),
            "omega": [{"ratio": str(r), "value": r.value} for r in self.omega],
            "omega_complete": self.omega_complete,
        }


@dataclass(frozen=True)
class RigidityReport:
    distance: float
    forced_scalar: bool
    asserted: bool


@dataclass(frozen=True)
class ProbeReport:
    sup_norm: float
    growing: bool


def _as_family(fam):
    return fam if isinstance(fam, CosineFamily) else CosineFamily(fam)


def family_eval(fam, t, opts=DEFAULT_OPTIONS):
    """``C(t) = cos(tA)``."""
    fam = _as_family(fam)
    return mat_cos(float(t) * fam.generator, opts)


def _cluster(eigs, scale):
    order = sorted(range(len(eigs)), key=lambda i: (eigs[i].real, eigs[i].imag))
    groups = []
    for i in order:
        for g in groups:
            if min(abs(eigs[i] - eigs[j]) for j in g) <= MERGE_TOL * scale:
                g.append(i)
                break
        else:
            groups.append([i])
    return [complex(np.mean(eigs[g])) for g in groups]


def spectral_idempotents(A):
    """Eigenvalue/projection pairs of a diagonalizable matrix.

    Projections come from Lagrange interpolation on the distinct
    eigenvalues, ``P_j = prod_{i != j} (A - l_i I) / (l_j - l_i)``, and are
    checked for ``P_j^2 = P_j``, ``P_i P_j = 0``, ``sum P_j = I`` and
    ``A = sum l_j P_j``.
    """
    A = as_square_matrix(A)
    n = A.shape[0]
    scale = max(1.0, norm2(A))
    lams = _cluster(np.linalg.eigvals(A), scale)
    for i, li in enumerate(lams):
        for lj in lams[i + 1:]:
            gap = abs(li - lj)
            if gap < SEPARATION_TOL * scale:
                raise IllSeparatedSpectrumError(
                    "eigenvalue clusters too close for stable projections", gap)
    real = not np.iscomplexobj(A) and all(abs(l.imag) <= MERGE_TOL * scale for l in lams)
    dtype = float if real else complex
    if real:
        lams = [complex(l.real, 0.0) for l in lams]
    eye = np.eye(n, dtype=complex)
    shifted = [A - l * eye for l in lams]

    minpoly = reduce(np.matmul, shifted, eye)
    if norm2(minpoly) > 1e-7 * math.prod(max(norm2(S), scale) for S in shifted):
        raise NotDiagonalizableError("minimal polynomial has a repeated root")

    pairs = []
    for j, lj in enumerate(lams):
        P = eye.copy()
        for i, li in enumerate(lams):
            if i != j:
                P = P @ shifted[i] / (lj - li)
        if real:
            P = P.real
        lam = lj.real if real else lj
        pairs.append((lam, P.astype(dtype)))
    _check_idempotents(A, pairs)
    return pairs


def _check_idempotents(A, pairs):
    n = A.shape[0]
    big = max(1.0, max(norm2(P) for _, P in pairs) ** 2)
    tol = IDEMPOTENT_TOL * big
    total = sum(P for _, P in pairs)
    recon = sum(l * P for l, P in pairs)
    worst = max(
        [np.max(np.abs(P @ P - P)) for _, P in pairs]
        + [np.max(np.abs(P @ Q)) for i, (_, P) in enumerate(pairs)
           for j, (_, Q) in enumerate(pairs) if i != j]
        + [np.max(np.abs(total - np.eye(n)))]
        + [np.max(np.abs(recon - A)) / max(1.0, norm2(A))]
    )
    if not worst <= tol:
        raise NotDiagonalizableError(
            f"spectral projections fail idempotent identities (error {worst:.2e})")


def frequency_components(fam):
    """``[(b_j, P_j)]`` sorted by frequency, with ``cos(tA) = sum cos(b_j t) P_j``."""
    fam = _as_family(fam)
    A = fam.generator
    B = A @ A
    try:
        pairs = spectral_idempotents(B)
    except NotDiagonalizableError as exc:
        raise UnboundedFamilyError(
            f"defective generator gives an unbounded cosine family ({exc}); "
            "see boundedness_probe") from exc
    scale = max(1.0, norm2(B))
    comps = []
    for mu, P in pairs:
        mu = complex(mu)
        if abs(mu.imag) > MERGE_TOL * scale or mu.real < -MERGE_TOL * scale:
            raise UnboundedFamilyError(
                f"generator squared has eigenvalue {mu:.6g} outside [0, inf); "
                "the cosine family grows exponentially")
        comps.append((math.sqrt(max(mu.real, 0.0)), P))
    comps.sort(key=lambda c: c[0])
    return comps


def _is_orthogonal(P):
    return np.max(np.abs(P - P.conj().T)) <= 1e-10


def _same_frequency(a, b):
    # eigenvalues of A^2 for non-normal A carry ~cond^2 * eps relative error
    return abs(a - b) <= MEMBERSHIP_SLACK * max(1.0, a, b)


def _common_period(freqs):
    """Smallest common period of ``cos(f t)`` over ``freqs``, or None."""
    pos = [f for f in freqs if f > 0.0]
    if not pos:
        return 2.0 * math.pi
    base = min(pos)
    lcm = 1
    for f in pos:
        cls = classify_ratio(base, f)
        if cls.kind == IRRATIONAL:
            return None
        lcm = math.lcm(lcm, cls.q)
        if lcm > MAX_PERIOD_MULTIPLE:
            return None
    return 2.0 * math.pi * lcm / base


def _difference_norms(ts, a, comps):
    b = np.array([c[0] for c in comps])
    P = np.stack([c[1] for c in comps])
    ts = np.atleast_1d(ts)
    out = np.empty(ts.shape[0])
    step = max(1, 2**20 // (P.shape[1] ** 2 * len(comps)))
    for s in range(0, ts.shape[0], step):
        t = ts[s:s + step]
        W = np.cos(np.outer(t, b)) - np.cos(a * t)[:, None]
        D = np.einsum("nk,kij->nij", W, P)
        out[s:s + step] = np.linalg.norm(D, ord=2, axis=(1, 2))
    return out


def _periodic_sup(a, comps, period):
    fastest = max([a] + [c[0] for c in comps])
    # cover half a period (the norm is even and periodic), >= 32 points per oscillation
    half = period / 2.0
    n = int(min(4 * 10**6, max(GRID_POINTS, 32 * fastest * half / (2 * math.pi))))
    ts = np.linspace(0.0, half, n + 1)
    vals = _difference_norms(ts, a, comps)
    h = ts[1] - ts[0]
    interior = np.flatnonzero(
        (vals >= np.roll(vals, 1)) & (vals >= np.roll(vals, -1)))
    cand = interior[np.argsort(vals[interior])[-8:]] if interior.size else [int(np.argmax(vals))]
    best_v, best_t = float(np.max(vals)), float(ts[int(np.argmax(vals))])
    for i in cand:
        lo, hi = max(0.0, ts[i] - h), min(half, ts[i] + h)
        res = minimize_scalar(lambda t: -_difference_norms(t, a, comps)[0],
                              bounds=(lo, hi), method="bounded",
                              options={"xatol": REFINE_XTOL})
        if -res.fun > best_v:
            best_v, best_t = float(-res.fun), float(res.x)
    lipschitz = sum((b + a) * norm2(P) for b, P in comps)
    upper = float(np.max(vals)) + lipschitz * h / 2.0
    return DistanceReport(best_v, best_t, "periodic_grid", best_v, max(upper, best_v))


def _lower_bound_sup(a, comps, n_max=10**6):
    times = set()
    for b, _ in comps:
        if a > 0 and b > 0:
            times.update(n for n, _ in running_sup(a, b, n_max).pairs[-4:])
        elif b > 0:
            times.add(math.pi / b)
        elif a > 0:
            times.add(math.pi / a)
    times = sorted(float(t) for t in times) or [0.0]
    vals = _difference_norms(np.array(times), a, comps)
    i = int(np.argmax(vals))
    lower = float(vals[i])
    if all(_is_orthogonal(P) for _, P in comps):
        upper = 2.0
    else:
        upper = 2.0 * sum(norm2(P) for _, P in comps)
    # some component has scalar distance 2, and ||D(t)|| >= |w_j(t)|
    return DistanceReport(max(lower, 2.0), times[i], "lower_bound_only", lower, max(upper, lower))


def sup_family_distance(fam, a, opts=DEFAULT_OPTIONS):
    """``sup_t ||cos(tA) - cos(at) I||`` with a method tag and bounds.

    * ``chebyshev_exact``: the difference is a single scaled scalar cosine
      difference, or the projections are orthogonal so the norm is the
      largest scalar difference.
    * ``periodic_grid``: all frequency ratios are rational; grid over one
      common half-period, refined by bounded Brent search.
    * ``lower_bound_only``: an irrational ratio; the supremum is at least 2
      and ``lower`` is the best norm actually observed.
    """
    fam = _as_family(fam)
    if a < 0:
        raise ValueError("a must be nonnegative")
    a = float(a)
    comps = frequency_components(fam)
    others = [(b, P) for b, P in comps if not _same_frequency(a, b)]
    if not others:
        return DistanceReport(0.0, 0.0, "chebyshev_exact", 0.0, 0.0)

    orthogonal = all(_is_orthogonal(P) for _, P in comps)
    if orthogonal or len(others) == 1:
        reports = []
        for b, P in others:
            rep = scalar_distance(a, b)
            w = 1.0 if orthogonal else norm2(P)
            reports.append((rep, w))
        if all(r.method == "chebyshev_exact" for r, _ in reports):
            rep, w = max(reports, key=lambda rw: rw[0].value * rw[1])
            v = rep.value * w
            return DistanceReport(v, rep.t_star, "chebyshev_exact", v, v)

    period = _common_period([a] + [b for b, _ in others])
    if period is None:
        return _lower_bound_sup(a, others)
    return _periodic_sup(a, others, period)


def _reconstruction_residual(fam, comps, period, opts):
    ts = np.linspace(0.0, period, RESIDUAL_POINTS)
    worst = 0.0
    for t in ts:
        approx = sum(math.cos(b * t) * P for b, P in comps)
        worst = max(worst, norm2(family_eval(fam, t, opts) - approx))
    return worst


def _direct_members(a, freqs, budget):
    """Members of ``Omega(a, budget)`` among ``freqs``, checked one by one."""
    out = set()
    for b in freqs:
        if a == 0.0 or b <= 0.0:
            continue
        cls = classify_ratio(a, b)
        if cls.kind != RATIONAL_ODD_ODD or max(cls.p, cls.q) > MAX_DEGREE:
            continue
        if sup_cheb_distance(cls.p, cls.q).value <= budget + MEMBERSHIP_TOL:
            out.add(RationalFrequency(cls.p, cls.q, a))
    return sorted(out, key=lambda r: r.ratio)


def decompose(fam, a, opts=DEFAULT_OPTIONS):
    """Write ``cos(tA) = sum_j cos(b_j t) P_j`` and certify each ``b_j``.

    Requires a certified distance ``m < 2`` to ``cos(at) I``; then every
    frequency must lie in ``Omega(a, m)`` and there are at most
    ``|Omega(a, m)|`` of them.
    """
    fam = _as_family(fam)
    rep = sup_family_distance(fam, a, opts)
    if rep.method == "lower_bound_only" or not rep.value < 2.0:
        raise HypothesisNotMetError(
            f"distance {rep.value:.6g} ({rep.method}) is not certified below 2")
    m = rep.value
    budget = min(m + MEMBERSHIP_SLACK, math.nextafter(2.0, 0.0))
    comps = frequency_components(fam)
    try:
        omega = enumerate_omega(a, budget)
        members, complete = list(omega.members), True
    except BudgetError:
        # m so close to 2 that Omega needs candidates past the degree cap;
        # certify each frequency directly instead
        members, complete = _direct_members(a, [b for b, _ in comps], budget), False

    for b, _ in comps:
        if a == 0.0:
            inside = b == 0.0
        else:
            cls = classify_ratio(a, b) if b > 0 else None
            inside = cls is not None and any(
                r.p == cls.p and r.q == cls.q for r in members)
        if not inside:
            raise ConsistencyError(f"frequency {b!r} outside Omega({a}, {budget})")
    if complete and len(comps) > len(members):
        raise ConsistencyError(f"k={len(comps)} exceeds |Omega|={len(members)}")

    period = _common_period([a] + [b for b, _ in comps])
    residual = _reconstruction_residual(fam, comps, period, opts)
    if residual > RESIDUAL_TOL:
        raise ConsistencyError(f"reconstruction residual {residual:.2e} above {RESIDUAL_TOL}")
    return Decomposition(
        k=len(comps),
        frequencies=[b for b, _ in comps],
        projections=[P for _, P in comps],
        residual=residual,
        distance=m,
        omega_budget=budget,
        omega=members,
        omega_complete=complete,
    )


def rigidity_check(fam, a, opts=DEFAULT_OPTIONS):
    """Below the optimal constant the family must be ``cos(at) I``."""
    fam = _as_family(fam)
    dec = decompose(fam, a, opts)
    if dec.distance >= OPTIMAL_CONSTANT - MEMBERSHIP_SLACK:
        return RigidityReport(dec.distance, False, False)
    scalar = dec.k == 1 and abs(dec.frequencies[0] - a) <= MEMBERSHIP_SLACK * max(1.0, a)
    return RigidityReport(dec.distance, scalar, True)


def boundedness_probe(fam, t_max, samples=2001, opts=DEFAULT_OPTIONS):
    """Sample ``||cos(tA)||`` on ``[0, t_max]``.

    ``growing`` is set when the largest norm over the last quarter of the
    window is at least twice the largest over the first quarter.
    """
    fam = _as_family(fam)
    if not t_max > 0:
        raise ValueError("t_max must be positive")
    if samples < 4:
        raise ValueError("samples must be at least 4")
    ts = np.linspace(0.0, float(t_max), int(samples))
    norms = np.array([norm2(family_eval(fam, t, opts)) for t in ts])
    quarter = max(1, len(ts) // 4)
    growing = bool(np.max(norms[-quarter:]) >= 2.0 * np.max(norms[:quarter]))
    return ProbeReport(float(np.max(norms)), growing)
