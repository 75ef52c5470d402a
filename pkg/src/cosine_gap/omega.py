"""Frequency sets within a sup-distance budget, and real-ratio classification.

``Omega(a, m)`` is the set of ``b >= 0`` with ``sup_t |cos(at) - cos(bt)| <= m``.
For ``m < 2`` every member is ``a * p / q`` with ``p, q`` odd and coprime and
``p, q <= pi / arccos(m - 1)``, so the set is enumerated exactly from
reduced fractions and filtered with :func:`sup_cheb_distance`.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .chebyshev import MAX_DEGREE, sup_cheb_distance
from .errors import BudgetError, DomainError

MEMBERSHIP_TOL = 1e-12
MAX_DENOMINATOR = 10**6
RATIONAL_RTOL = 1e-12
# q^2 |x - p/q| must be this small for a convergent to count as the exact
# ratio: irrational ratios keep q^2 |x - p/q| of order one at every depth.
CONVERGENT_GAP = 1e-3
OPTIMAL_CONSTANT = 8.0 / (3.0 * math.sqrt(3.0))

RATIONAL_ODD_ODD = "RationalOddOdd"
RATIONAL_WITH_EVEN = "RationalWithEven"
IRRATIONAL = "Irrational"


@dataclass(frozen=True, order=True)
class RationalFrequency:
    """The frequency ``base * p / q`` with ``p, q`` odd and coprime."""

    p: int
    q: int
    base: float = field(default=1.0, compare=False)

    def __post_init__(self):
        if self.p < 1 or self.q < 1:
            raise DomainError("p and q must be positive")
        if math.gcd(self.p, self.q) != 1:
            raise DomainError(f"{self.p}/{self.q} is not reduced")
        if self.p % 2 == 0 or self.q % 2 == 0:
            raise DomainError(f"{self.p}/{self.q} has an even term")

    @property
    def ratio(self):
        return Fraction(self.p, self.q)

    @property
    def value(self):
        return self.base * self.p / self.q

    def __str__(self):
        return str(self.p) if self.q == 1 else f"{self.p}/{self.q}"


@dataclass
class OmegaSet:
    base: float
    budget: float
    members: list
    candidate_bound: int
    distances: list

    @property
    def values(self):
        return [m.value for m in self.members]

    def __contains__(self, b):
        if self.base == 0.0:
            return b == 0.0
        cls = classify_ratio(self.base, b) if b > 0 else None
        if cls is None or cls.kind != RATIONAL_ODD_ODD:
            return False
        return any(m.p == cls.p and m.q == cls.q for m in self.members)

    def __len__(self):
        return len(self.members)


@dataclass(frozen=True)
class RatioClassification:
    kind: str
    p: int | None
    q: int | None
    confidence: int

    @property
    def is_rational(self):
        return self.kind != IRRATIONAL


@dataclass(frozen=True)
class DistanceReport:
    """A sup-distance value bracketed by certified bounds."""

    value: float
    t_star: float
    method: str
    lower: float
    upper: float


def candidate_bound(m):
    """Largest admissible numerator/denominator for budget ``m``."""
    _check_budget(m)
    # a hair of slack only adds candidates; the distance filter removes them
    return math.floor(math.pi / math.acos(m - 1.0) + 1e-9)


def _check_budget(m):
    if not m >= 0.0:
        raise BudgetError(f"budget m={m!r} must be nonnegative")
    if m >= 2.0:
        raise BudgetError(f"budget m={m!r} >= 2 admits infinitely many frequencies")


def odd_coprime_pairs(n):
    """All ``(p, q)`` with ``1 <= p, q <= n``, both odd and coprime."""
    odds = range(1, n + 1, 2)
    return [(p, q) for p in odds for q in odds if math.gcd(p, q) == 1]


def enumerate_omega(a, m, workers=1):
    """Enumerate ``Omega(a, m)`` as a sorted list of rational frequencies.

    Boundary members (distance exactly ``m``) are included within
    ``MEMBERSHIP_TOL``.
    """
    _check_budget(m)
    if a < 0:
        raise DomainError(f"base frequency must be nonnegative, got {a!r}")
    a = float(a)
    n = candidate_bound(m)
    if a == 0.0:
        return OmegaSet(0.0, m, [RationalFrequency(1, 1, 0.0)], n, [0.0])
    if n > MAX_DEGREE:
        raise BudgetError(
            f"budget m={m!r} needs candidates up to {n}, beyond the degree cap {MAX_DEGREE}")
    pairs = odd_coprime_pairs(n)
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(lambda pq: sup_cheb_distance(*pq).value, pairs))
    else:
        values = [sup_cheb_distance(p, q).value for p, q in pairs]
    kept = sorted((Fraction(p, q), d) for (p, q), d in zip(pairs, values)
                  if d <= m + MEMBERSHIP_TOL)
    members = [RationalFrequency(r.numerator, r.denominator, a) for r, _ in kept]
    return OmegaSet(a, m, members, n, [d for _, d in kept])


def convergents(x, depth):
    """Continued-fraction terms and convergents of the float ``x``.

    The expansion runs on the exact binary value of ``x`` so it never drifts;
    it stops after ``depth`` terms or when the expansion terminates.
    Yields ``(a_k, p_k, q_k)``.
    """
    f = Fraction(x)
    p0, p1, q0, q1 = 0, 1, 1, 0
    for _ in range(depth + 1):
        a = f.numerator // f.denominator
        p0, p1 = p1, a * p1 + p0
        q0, q1 = q1, a * q1 + q0
        yield a, p1, q1
        rest = f - a
        if rest == 0:
            return
        f = 1 / rest


def classify_ratio(a, b, depth=40):
    """Decide whether ``b / a`` is rational and, if so, the parity of its terms.

    A convergent ``p/q`` with ``q <= 10**6`` is accepted when it matches
    ``b/a`` to ``1e-12 * (1 + b/a)`` and its continued fraction effectively
    terminates there (``q**2 * |b/a - p/q| <= 1e-3``). ``confidence`` is the
    convergent depth reached.
    """
    if not (a > 0 and b > 0):
        raise DomainError("classify_ratio needs a > 0 and b > 0")
    x = b / a
    tol = RATIONAL_RTOL * (1.0 + abs(x))
    k = 0
    for k, (_, p, q) in enumerate(convergents(x, depth)):
        if q > MAX_DENOMINATOR:
            break
        err = abs(x - p / q)
        if err <= tol and q * q * err <= CONVERGENT_GAP:
            kind = RATIONAL_ODD_ODD if p % 2 and q % 2 else RATIONAL_WITH_EVEN
            return RatioClassification(kind, p, q, k)
    return RatioClassification(IRRATIONAL, None, None, k)


def scalar_distance(a, b, kronecker_n=10**5):
    """Sup-distance between ``cos(at)`` and ``cos(bt)``.

    Rational ratios with odd terms go through the Chebyshev extremum; the
    argmax time is rescaled to the ``t`` axis. Irrational ratios have
    supremum 2; the lower bound reported for them is a running maximum
    over integer times ``t = 1..kronecker_n``.
    """
    if a < 0 or b < 0:
        raise DomainError("frequencies must be nonnegative")
    a, b = float(a), float(b)
    if a == b:
        return DistanceReport(0.0, 0.0, "chebyshev_exact", 0.0, 0.0)
    if a == 0.0 or b == 0.0:
        t = math.pi / max(a, b)
        return DistanceReport(2.0, t, "chebyshev_exact", 2.0, 2.0)
    cls = classify_ratio(a, b)
    if cls.kind == IRRATIONAL:
        from .kronecker import running_sup

        seq = running_sup(a, b, kronecker_n)
        t = float(seq.pairs[-1][0]) if seq.pairs else 1.0
        return DistanceReport(2.0, t, "lower_bound_only", seq.final_sup, 2.0)
    # b/a = p/q: with s = a t / q, cos(at) = cos(q s) and cos(bt) = cos(p s)
    p, q = cls.p, cls.q
    if max(p, q) > MAX_DEGREE:
        if cls.kind == RATIONAL_WITH_EVEN:
            return DistanceReport(2.0, q * math.pi / a, "chebyshev_exact", 2.0, 2.0)
        lower = 1.0 + math.cos(math.pi / max(p, q))
        return DistanceReport(lower, 0.0, "lower_bound_only", lower, 2.0)
    res = sup_cheb_distance(p, q)
    t = q * res.t_star / a
    return DistanceReport(res.value, t, "chebyshev_exact", res.value, res.value)
