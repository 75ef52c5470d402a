import math
import warnings
from fractions import Fraction

import mpmath
import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.polynomial import chebyshev as C

from cosine_gap.errors import DomainError, PreconditionError, SeriesTruncationError
from cosine_gap.matrix_calculus import (
    SeriesOptions,
    SlowConvergenceWarning,
    alpha_closed_form,
    alpha_coefficients,
    arccos_coefficients,
    coefficient_partial_sums,
    coefficient_sum_check,
    mat_arccos,
    mat_cos,
    mat_sin,
    mat_sinc,
    nilpotent_cancellation_check,
    norm2,
    power_boundedness,
    reconstruct_sequence,
)
from cosine_gap.selftest import random_symmetric

N = np.array([[0.0, 1.0], [0.0, 0.0]])


def eig_arccos(X):
    w, V = np.linalg.eigh(X)
    return V @ np.diag(np.arccos(w)) @ V.T


def test_cos_of_zero_is_identity():
    assert np.array_equal(mat_cos(np.zeros((2, 2))), np.eye(2))


def test_cos_diagonal():
    np.testing.assert_allclose(mat_cos(np.diag([math.pi, math.pi / 2])), np.diag([-1.0, 0.0]), atol=1e-14)


def test_cos_of_symmetric_off_diagonal():
    th = 0.3
    np.testing.assert_allclose(mat_cos([[0.0, th], [th, 0.0]]), math.cos(th) * np.eye(2), atol=1e-15)


def test_cos_of_rotation_generator_is_hyperbolic():
    # X^2 = -th^2 I here, so the series sums to cosh(th) I
    th = 0.3
    np.testing.assert_allclose(mat_cos([[0.0, th], [-th, 0.0]]), math.cosh(th) * np.eye(2), atol=1e-15)


@pytest.mark.parametrize("scale", [0.1, 1.0, 5.0, 40.0])
def test_cos_sin_against_scipy(scale):
    rng = np.random.default_rng(int(scale * 10))
    for n in (1, 3, 6):
        X = rng.normal(size=(n, n))
        X *= scale / norm2(X)
        tol = 1e-12 * max(1.0, norm2(scipy.linalg.cosm(X)))
        np.testing.assert_allclose(mat_cos(X), scipy.linalg.cosm(X), atol=tol * scale)
        np.testing.assert_allclose(mat_sin(X), scipy.linalg.sinm(X), atol=tol * scale)


def test_complex_input_against_scipy():
    rng = np.random.default_rng(5)
    X = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    np.testing.assert_allclose(mat_cos(X), scipy.linalg.cosm(X), atol=1e-11)


def test_sinc_values():
    assert np.array_equal(mat_sinc(np.zeros((3, 3))), np.eye(3))
    assert abs(mat_sinc([[math.pi]])[0, 0]) < 1e-15
    assert abs(mat_sin([[math.pi]])[0, 0]) < 1e-15


def test_sin_is_x_times_sinc():
    rng = np.random.default_rng(2)
    X = rng.normal(size=(3, 3))
    X *= 2.0 / norm2(X)
    np.testing.assert_allclose(X @ mat_sinc(X), mat_sin(X), atol=1e-14)


def test_diagonal_inputs_act_entrywise():
    d = np.array([-0.9, -0.2, 0.0, 0.4, 0.95])
    X = np.diag(d)
    np.testing.assert_allclose(np.diag(mat_cos(X)), np.cos(d), atol=1e-10)
    np.testing.assert_allclose(np.diag(mat_sin(X)), np.sin(d), atol=1e-10)
    np.testing.assert_allclose(np.diag(mat_sinc(X)), np.sinc(d / np.pi), atol=1e-10)
    np.testing.assert_allclose(np.diag(mat_arccos(X)), np.arccos(d), atol=1e-10)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(-3, 3), st.floats(-3, 3))
def test_dalembert_law(seed, s, t):
    A = np.random.default_rng(seed).normal(size=(3, 3))
    lhs = mat_cos((s + t) * A) + mat_cos((s - t) * A)
    rhs = 2.0 * mat_cos(s * A) @ mat_cos(t * A)
    assert norm2(lhs - rhs) <= 1e-10 * max(1.0, norm2(rhs))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(-2, 2), st.floats(-2, 2))
def test_cosine_difference_product_formula(seed, x, y):
    A = np.random.default_rng(seed).normal(size=(3, 3))
    A /= norm2(A)
    X, Y = x * A + 0.3 * A @ A, y * A
    lhs = mat_cos(X) - mat_cos(Y)
    rhs = 2.0 * mat_sin((Y - X) / 2) @ mat_sin((X + Y) / 2)
    assert norm2(lhs - rhs) <= 1e-10


def test_truncation_error_reports_residual():
    with pytest.raises(SeriesTruncationError) as exc:
        mat_cos(np.eye(2), SeriesOptions(max_terms=2))
    assert exc.value.residual > 0


def test_bad_inputs():
    with pytest.raises(DomainError):
        mat_cos(np.zeros((2, 3)))
    with pytest.raises(DomainError):
        mat_cos([[np.nan]])
    with pytest.raises(DomainError):
        SeriesOptions(tol=0.0)


def test_arccos_of_zero():
    np.testing.assert_allclose(mat_arccos(np.zeros((2, 2))), math.pi / 2 * np.eye(2), atol=1e-15)


def test_arccos_symmetric_against_eigen_oracle():
    X = np.array([[0.5, 0.1], [0.1, 0.5]])
    Y = mat_arccos(X)
    np.testing.assert_allclose(Y, eig_arccos(X), atol=1e-13)
    np.testing.assert_allclose(mat_cos(Y), X, atol=1e-10)


def test_arccos_random_symmetric():
    rng = np.random.default_rng(8)
    for _ in range(20):
        X = random_symmetric(rng, int(rng.integers(1, 9)))
        Y = mat_arccos(X)
        np.testing.assert_allclose(Y, eig_arccos(X), atol=1e-11)
        assert norm2(mat_cos(Y) - X) < 1e-9


def test_arccos_at_spectral_edge():
    X = np.diag([1.0, -1.0])
    with pytest.warns(SlowConvergenceWarning):
        Y, info = mat_arccos(X, SeriesOptions(max_terms=10**6), full_output=True)
    assert not info["converged"]
    np.testing.assert_allclose(np.diag(Y), [0.0, math.pi], atol=1e-3)
    assert abs(Y[0, 1]) == 0.0


def test_arccos_norm_bound():
    rng = np.random.default_rng(4)
    for _ in range(10):
        S = rng.normal(size=(3, 3)) + 3 * np.eye(3)
        X = S @ np.diag(rng.uniform(-0.9, 0.9, 3)) @ np.linalg.inv(S)
        M = power_boundedness(X).sup_norm
        assert norm2(mat_arccos(X)) <= (M + 1) * math.pi / 2 + 1e-6


def test_arccos_preconditions():
    with pytest.raises(PreconditionError):
        mat_arccos(np.diag([1.2, 0.0]))
    with pytest.raises(PreconditionError):
        mat_arccos([[1.0, 100.0], [0.0, 1.0]])


def test_arccos_coefficients_against_exact_values():
    c = arccos_coefficients(30)
    for n in range(30):
        exact = Fraction(math.factorial(2 * n), 4**n * (2 * n + 1) * math.factorial(n) ** 2)
        assert c[n] == pytest.approx(float(exact), rel=1e-14)


def test_coefficient_sums():
    assert coefficient_sum_check(1) == 1.0
    assert coefficient_sum_check(2) == pytest.approx(7 / 6, abs=1e-15)
    sums = coefficient_partial_sums(10**6)
    assert np.all(np.diff(sums) > 0)
    assert 0 < math.pi / 2 - sums[-1] <= 1.2e-3


def test_coefficient_sum_against_high_precision():
    terms = 5000
    with mpmath.workdps(30):
        ref = mpmath.fsum(mpmath.binomial(2 * n, n) / (mpmath.mpf(4) ** n * (2 * n + 1))
                          for n in range(terms))
    assert coefficient_sum_check(terms) == pytest.approx(float(ref), abs=1e-13)


@pytest.mark.parametrize("p,expected", [(1, [0, 1]), (2, [0.5, 0, 0.5]), (3, [0, 0.75, 0, 0.25])])
def test_alpha_small(p, expected):
    assert alpha_coefficients(p).coefficients.tolist() == expected


def test_alpha_closed_form_exact():
    for p in range(1, 61):
        assert list(alpha_coefficients(p, exact=True).coefficients) == alpha_closed_form(p)


def test_alpha_against_chebyshev_basis_change():
    # x^p written in the T_k basis has exactly the alpha coefficients
    for p in range(1, 41):
        mono = np.zeros(p + 1)
        mono[p] = 1.0
        np.testing.assert_allclose(alpha_coefficients(p).coefficients, C.poly2cheb(mono), atol=1e-14)


def test_alpha_sums_and_trig_identity():
    rng = np.random.default_rng(9)
    for p in range(1, 51):
        al = alpha_coefficients(p).coefficients
        assert sum(alpha_coefficients(p, exact=True).coefficients) == 1
        assert math.fsum(al) == pytest.approx(1.0, abs=1e-14)
        for th in rng.uniform(0, 2 * math.pi, 20):
            assert abs(math.cos(th) ** p - sum(al[k] * math.cos(k * th) for k in range(p + 1))) < 1e-12


def test_power_boundedness_examples():
    rep = power_boundedness(np.diag([math.cos(1), math.cos(2)]))
    assert rep.sup_norm <= 1.0 and not rep.growing
    rep = power_boundedness(np.diag([math.cos(1), math.cos(3)]))
    assert rep.sup_norm <= 1.0
    rep = power_boundedness([[1.0, 1.0], [0.0, 1.0]])
    assert rep.growing
    assert rep.sup_norm == pytest.approx(norm2([[1.0, 256.0], [0.0, 1.0]]), rel=1e-12)


def test_power_boundedness_overflow():
    rep = power_boundedness([[1e200, 0.0], [0.0, 0.0]], 10)
    assert rep.growing and math.isfinite(rep.sup_norm)


def test_reconstruct_identity():
    for M in reconstruct_sequence(np.eye(2), 5):
        np.testing.assert_allclose(M, np.eye(2), atol=1e-12)


def test_reconstruct_scalar_and_diagonal():
    beta = 0.7
    seq = reconstruct_sequence([[math.cos(beta)]], 4)
    np.testing.assert_allclose([M[0, 0] for M in seq], np.cos(beta * np.arange(5)), atol=1e-12)
    seq = reconstruct_sequence(np.diag([math.cos(1), math.cos(3)]), 6)
    for n, M in enumerate(seq):
        np.testing.assert_allclose(M, np.diag([math.cos(n), math.cos(3 * n)]), atol=1e-10)


def test_cancellation_identical_inputs():
    r = nilpotent_cancellation_check(N, N, 1.0)
    assert r.case == "(i)" and r.hypothesis_holds and r.equal
    assert r.residual == 0.0 and r.sinc_min_singular > 0.5


def test_cancellation_hypothesis_fails():
    r = nilpotent_cancellation_check(N, 2 * N, 1.0)
    assert not r.hypothesis_holds and r.equal is None


def test_cancellation_at_multiple_of_pi():
    eps = 0.1
    r = nilpotent_cancellation_check(eps * N, -eps * N, math.pi)
    assert r.case == "(ii)" and r.hypothesis_holds and r.equal
    assert r.sinc_min_singular > 0.5


def test_cancellation_preconditions():
    with pytest.raises(PreconditionError):
        nilpotent_cancellation_check(N, N.T, 1.0)
    with pytest.raises(PreconditionError):
        nilpotent_cancellation_check(np.eye(2), np.eye(2), 1.0)


def test_slow_convergence_is_silent_when_it_converges():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        mat_arccos(np.diag([0.3, -0.5]))
