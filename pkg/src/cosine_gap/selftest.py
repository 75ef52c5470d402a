"""Seeded invariant suite behind ``cosine-gap selftest``.

Each check returns ``(name, passed, detail)``. The random models here are
also used by the pytest suite.
"""
from __future__ import annotations

import math

import numpy as np

from .chebyshev import cheb_eval, sup_cheb_distance
from .decomposition import (
    boundedness_probe,
    decompose,
    rigidity_check,
    spectral_idempotents,
    sup_family_distance,
)
from .errors import HypothesisNotMetError, UnboundedFamilyError
from .kronecker import running_sup
from .matrix_calculus import (
    alpha_closed_form,
    alpha_coefficients,
    coefficient_partial_sums,
    mat_arccos,
    mat_cos,
    mat_sin,
    nilpotent_cancellation_check,
    norm2,
)
from .omega import OPTIMAL_CONSTANT, enumerate_omega


def random_conjugator(rng, n, max_cond=10.0):
    """Random ``S = Q1 diag(s) Q2`` with ``cond(S)`` log-uniform in ``[1, max_cond]``."""
    q1, _ = np.linalg.qr(rng.normal(size=(n, n)))
    q2, _ = np.linalg.qr(rng.normal(size=(n, n)))
    kappa = math.exp(rng.uniform(0.0, math.log(max_cond)))
    s = np.exp(rng.uniform(0.0, math.log(kappa), n))
    s[0], s[-1] = 1.0, kappa
    return q1 @ np.diag(s) @ q2


def conjugated_diagonal(rng, diag, max_cond=10.0):
    S = random_conjugator(rng, len(diag), max_cond)
    return S @ np.diag(diag) @ np.linalg.inv(S)


def random_symmetric(rng, n, radius=0.95):
    q, _ = np.linalg.qr(rng.normal(size=(n, n)))
    return q @ np.diag(rng.uniform(-radius, radius, n)) @ q.T


def _check_chebyshev_identity(rng):
    worst = 0.0
    for _ in range(200):
        n = int(rng.integers(0, 26))
        t = rng.uniform(0.0, 2.0 * math.pi)
        worst = max(worst, abs(cheb_eval(n, math.cos(t)) - math.cos(n * t)))
    return worst < 1e-12, f"max error {worst:.2e}"


def _check_chebyshev_pairs(rng):
    for _ in range(20):
        p, q = (int(x) for x in rng.integers(1, 100, 2))
        r1, r2 = sup_cheb_distance(p, q), sup_cheb_distance(q, p)
        if r1.value != r2.value or not 0.0 <= r1.value <= 2.0:
            return False, f"pair ({p}, {q})"
        g = math.gcd(p, q)
        # an even term in the reduced ratio lets the two cosines reach +1 and -1 together
        if p != q and ((p // g) % 2 == 0 or (q // g) % 2 == 0) and abs(r1.value - 2.0) > 1e-9:
            return False, f"even pair ({p}, {q}) gave {r1.value}"
    return True, "symmetry, range and parity hold"


def _check_optimal_constant(rng):
    r = sup_cheb_distance(1, 3)
    ok = abs(r.value - OPTIMAL_CONSTANT) <= 1e-12 and abs(abs(r.u_star) - 1 / math.sqrt(3)) <= 1e-10
    return ok, f"value {r.value!r}"


def _check_omega_threshold(rng):
    below = enumerate_omega(1.0, OPTIMAL_CONSTANT - 1e-9)
    above = enumerate_omega(1.0, OPTIMAL_CONSTANT + 1e-9)
    ok = ([str(m) for m in below.members] == ["1"]
          and [str(m) for m in above.members] == ["1/3", "1", "3"])
    return ok, f"{[str(m) for m in below.members]} -> {[str(m) for m in above.members]}"


def _check_omega_monotone(rng):
    budgets = sorted(rng.uniform(0.0, 1.95, 5))
    prev = set()
    for m in budgets:
        cur = {(r.p, r.q) for r in enumerate_omega(1.0, m).members}
        if not prev <= cur:
            return False, f"lost members at m={m}"
        prev = cur
    return True, "nested"


def _check_alpha(rng):
    for p in range(1, 61):
        if list(alpha_coefficients(p, exact=True).coefficients) != alpha_closed_form(p):
            return False, f"closed form mismatch at p={p}"
    worst = 0.0
    for p in range(1, 51):
        al = alpha_coefficients(p).coefficients
        for th in rng.uniform(0.0, 2 * math.pi, 4):
            approx = sum(al[k] * math.cos(k * th) for k in range(p + 1))
            worst = max(worst, abs(math.cos(th) ** p - approx))
    return worst < 1e-12, f"trig error {worst:.2e}"


def _check_coefficient_sum(rng):
    sums = coefficient_partial_sums(10**6)
    gap = math.pi / 2 - sums[-1]
    ok = bool(np.all(np.diff(sums) > 0)) and 0 < gap <= 1.2e-3
    return ok, f"gap {gap:.3e}"


def _check_tautology(rng):
    worst = 0.0
    for _ in range(20):
        X = random_symmetric(rng, int(rng.integers(1, 9)))
        worst = max(worst, norm2(mat_cos(mat_arccos(X)) - X))
    return worst < 1e-9, f"max residual {worst:.2e}"


def _check_dalembert(rng):
    A = rng.normal(size=(4, 4))
    worst = 0.0
    for _ in range(10):
        s, t = rng.uniform(-2, 2, 2)
        lhs = mat_cos((s + t) * A) + mat_cos((s - t) * A)
        rhs = 2 * mat_cos(s * A) @ mat_cos(t * A)
        worst = max(worst, norm2(lhs - rhs) / max(1.0, norm2(rhs)))
    return worst < 1e-10, f"relative error {worst:.2e}"


def _check_product_formula(rng):
    A = rng.normal(size=(3, 3))
    A /= norm2(A)
    X, Y = 1.3 * A + 0.2 * A @ A, -0.7 * A
    lhs = mat_cos(X) - mat_cos(Y)
    rhs = 2 * mat_sin((Y - X) / 2) @ mat_sin((X + Y) / 2)
    err = norm2(lhs - rhs)
    return err < 1e-10, f"error {err:.2e}"


def _check_idempotents(rng):
    worst = 0.0
    for _ in range(10):
        n = int(rng.integers(2, 6))
        diag = rng.choice([-2.0, 0.5, 1.0, 3.0], size=n)
        A = conjugated_diagonal(rng, diag)
        pairs = spectral_idempotents(A)
        Ps = [P for _, P in pairs]
        errs = [np.max(np.abs(P @ P - P)) for P in Ps]
        errs += [np.max(np.abs(P @ Q)) for i, P in enumerate(Ps) for j, Q in enumerate(Ps) if i != j]
        errs.append(np.max(np.abs(sum(Ps) - np.eye(n))))
        worst = max(worst, max(errs))
    return worst <= 1e-9, f"max error {worst:.2e}"


def _check_structure(rng):
    accepted = 0
    while accepted < 10:
        a = rng.uniform(0.2, 3.0)
        diag = rng.choice([a / 3, a, 3 * a], size=int(rng.integers(2, 6)))
        A = conjugated_diagonal(rng, diag)
        try:
            dec = decompose(A, a)
        except HypothesisNotMetError:
            continue
        accepted += 1
        if dec.k != len(set(np.round(diag / a * 3).astype(int))) or dec.residual > 1e-8:
            return False, f"bad decomposition k={dec.k}"
    return True, "10 generators decomposed"


def _check_rigidity(rng):
    A = conjugated_diagonal(rng, [1.0, -1.0, 1.0])
    rep = rigidity_check(A, 1.0)
    ok = rep.forced_scalar and rep.distance < 1e-8
    rep2 = rigidity_check(np.diag([1.0, 3.0]), 1.0)
    ok = ok and not rep2.asserted and abs(rep2.distance - OPTIMAL_CONSTANT) <= 1e-9
    return ok, f"distances {rep.distance:.2e}, {rep2.distance!r}"


def _check_constant_family(rng):
    S = conjugated_diagonal(rng, [0.0, 0.0])
    dec = decompose(S, 0.0)
    ok = dec.k == 1 and dec.frequencies == [0.0] and dec.distance == 0.0
    return ok, "C(t) = I"


def _check_kronecker(rng):
    seq = running_sup(1.0, math.sqrt(2.0), 10**6)
    vals = [v for _, v in seq.pairs]
    ok = seq.final_sup >= 1.99 and all(x < y for x, y in zip(vals, vals[1:]))
    return ok, f"final sup {seq.final_sup!r}"


def _check_unbounded(rng):
    J = np.array([[1.0, 1.0], [0.0, 1.0]])
    probe = boundedness_probe(J, 100.0)
    try:
        sup_family_distance(J, 1.0)
    except UnboundedFamilyError:
        return probe.growing, f"probe sup {probe.sup_norm:.3g}"
    return False, "defective generator accepted"


def _check_cancellation(rng):
    N = np.array([[0.0, 1.0], [0.0, 0.0]])
    r1 = nilpotent_cancellation_check(N, N, 1.0)
    r2 = nilpotent_cancellation_check(N, 2 * N, 1.0)
    r3 = nilpotent_cancellation_check(0.1 * N, -0.1 * N, math.pi)
    ok = (r1.equal and not r2.hypothesis_holds and r3.case == "(ii)" and r3.equal
          and min(r1.sinc_min_singular, r3.sinc_min_singular) > 0.5)
    return bool(ok), "three verdicts as expected"


CHECKS = [
    ("chebyshev identity", _check_chebyshev_identity),
    ("chebyshev symmetry/range/parity", _check_chebyshev_pairs),
    ("optimal constant", _check_optimal_constant),
    ("omega threshold", _check_omega_threshold),
    ("omega monotone", _check_omega_monotone),
    ("alpha table", _check_alpha),
    ("arccos coefficient sum", _check_coefficient_sum),
    ("cos(arccos X) = X", _check_tautology),
    ("d'Alembert law", _check_dalembert),
    ("cos X - cos Y product formula", _check_product_formula),
    ("spectral idempotents", _check_idempotents),
    ("frequency decomposition", _check_structure),
    ("rigidity", _check_rigidity),
    ("constant family", _check_constant_family),
    ("kronecker records", _check_kronecker),
    ("unbounded Jordan family", _check_unbounded),
    ("nilpotent cancellation", _check_cancellation),
]


def run_selftest(seed=0):
    rng = np.random.default_rng(seed)
    results = []
    for name, check in CHECKS:
        try:
            ok, detail = check(rng)
        except Exception as exc:  # a crash is a failed check, reported as such
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append((name, bool(ok), detail))
    return results


