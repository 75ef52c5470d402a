import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cosine_gap.decomposition import (
    CosineFamily,
    boundedness_probe,
    decompose,
    family_eval,
    frequency_components,
    rigidity_check,
    spectral_idempotents,
    sup_family_distance,
)
from cosine_gap.errors import (
    HypothesisNotMetError,
    IllSeparatedSpectrumError,
    UnboundedFamilyError,
)
from cosine_gap.matrix_calculus import norm2
from cosine_gap.omega import OPTIMAL_CONSTANT, candidate_bound, enumerate_omega, scalar_distance
from cosine_gap.selftest import conjugated_diagonal, random_conjugator

V35 = 1.8570039956666502
JORDAN = np.array([[1.0, 1.0], [0.0, 1.0]])


def grid_family_distance(A, a, period, points=20001):
    ts = np.linspace(0.0, period, points)
    return max(norm2(family_eval(A, t) - math.cos(a * t) * np.eye(len(A))) for t in ts)


def test_family_eval_examples():
    np.testing.assert_allclose(family_eval(np.diag([1.0, 3.0]), math.pi), -np.eye(2), atol=1e-14)
    np.testing.assert_allclose(family_eval(JORDAN, 0.0), np.eye(2))
    expected = [[math.cos(2), -2 * math.sin(2)], [0.0, math.cos(2)]]
    np.testing.assert_allclose(family_eval(JORDAN, 2.0), expected, atol=1e-13)
    fam = CosineFamily([[2.0]])
    assert fam.dim == 1 and fam(1.0)[0, 0] == pytest.approx(math.cos(2.0))


def test_idempotents_diagonal():
    pairs = spectral_idempotents(np.diag([1.0, 3.0]))
    assert [lam for lam, _ in pairs] == pytest.approx([1.0, 3.0])
    np.testing.assert_allclose(pairs[0][1], np.diag([1.0, 0.0]), atol=1e-14)
    np.testing.assert_allclose(pairs[1][1], np.diag([0.0, 1.0]), atol=1e-14)


def test_idempotents_identity():
    pairs = spectral_idempotents(np.eye(4))
    assert len(pairs) == 1
    np.testing.assert_allclose(pairs[0][1], np.eye(4))


def test_idempotents_conjugate():
    S = random_conjugator(np.random.default_rng(1), 3, 5.0)
    Si = np.linalg.inv(S)
    pairs = spectral_idempotents(S @ np.diag([1.0, 3.0, 3.0]) @ Si)
    np.testing.assert_allclose(pairs[0][1], S @ np.diag([1.0, 0.0, 0.0]) @ Si, atol=1e-10)
    np.testing.assert_allclose(pairs[1][1], S @ np.diag([0.0, 1.0, 1.0]) @ Si, atol=1e-10)


def test_idempotent_algebra_random():
    rng = np.random.default_rng(21)
    for _ in range(100):
        n = int(rng.integers(2, 7))
        A = conjugated_diagonal(rng, rng.choice([-1.0, 0.2, 1.0, 2.5], size=n))
        Ps = [P for _, P in spectral_idempotents(A)]
        for i, P in enumerate(Ps):
            assert np.max(np.abs(P @ P - P)) <= 1e-9
            for j, Q in enumerate(Ps):
                if i != j:
                    assert np.max(np.abs(P @ Q)) <= 1e-9
        assert np.max(np.abs(sum(Ps) - np.eye(n))) <= 1e-9


def test_ill_separated_spectrum():
    with pytest.raises(IllSeparatedSpectrumError) as exc:
        spectral_idempotents(np.diag([1.0, 1.0 + 1e-9]))
    assert exc.value.gap < 1e-8


def test_frequencies_ignore_sign():
    comps = frequency_components(np.diag([-2.0, 2.0, 1.0]))
    assert [b for b, _ in comps] == pytest.approx([1.0, 2.0])


def test_defective_generator_is_unbounded():
    with pytest.raises(UnboundedFamilyError):
        frequency_components(JORDAN)
    with pytest.raises(UnboundedFamilyError):
        decompose(JORDAN, 1.0)
    # A^2 < 0 gives hyperbolic growth
    with pytest.raises(UnboundedFamilyError):
        frequency_components([[0.0, 1.0], [-1.0, 0.0]])


def test_distance_diag_one_three():
    rep = sup_family_distance(np.diag([1.0, 3.0]), 1.0)
    assert rep.method == "chebyshev_exact"
    assert rep.value == pytest.approx(OPTIMAL_CONSTANT, abs=1e-12)


def test_distance_scalar_family_is_zero():
    assert sup_family_distance(2.5 * np.eye(3), 2.5).value == 0.0


def test_distance_irrational_pair():
    rep = sup_family_distance(np.diag([1.0, math.sqrt(2.0)]), 1.0)
    assert rep.method == "lower_bound_only"
    assert rep.lower > 1.99 and rep.upper == 2.0 and rep.value == 2.0


def test_distance_non_normal_single_component():
    # one foreign frequency with an oblique projection scales the scalar gap
    rng = np.random.default_rng(6)
    A = conjugated_diagonal(rng, [1.0, 1.0, 3.0], 3.0)
    rep = sup_family_distance(A, 1.0)
    assert rep.method == "chebyshev_exact"
    assert rep.value == pytest.approx(grid_family_distance(A, 1.0, math.pi), abs=1e-6)


def test_distance_periodic_grid_against_dense_scan():
    rng = np.random.default_rng(13)
    A = conjugated_diagonal(rng, [1.0, 1.0 / 3.0, 3.0], 1.5)
    rep = sup_family_distance(A, 1.0)
    assert rep.method == "periodic_grid"
    # the common period of 1, 1/3 and 3 is 6 pi
    brute = grid_family_distance(A, 1.0, 6 * math.pi, 60001)
    assert rep.lower >= brute - 1e-9
    assert rep.value == pytest.approx(brute, abs=1e-5)
    assert rep.lower <= rep.value <= rep.upper


def test_decompose_diag_one_three():
    dec = decompose(np.diag([1.0, 3.0]), 1.0)
    assert dec.k == 2
    assert dec.frequencies == pytest.approx([1.0, 3.0])
    np.testing.assert_allclose(dec.projections[0], np.diag([1.0, 0.0]), atol=1e-14)
    np.testing.assert_allclose(dec.projections[1], np.diag([0.0, 1.0]), atol=1e-14)
    assert dec.residual < 1e-12
    assert [str(r) for r in dec.omega] == ["1/3", "1", "3"]
    d = dec.to_dict()
    assert d["k"] == 2 and d["omega"][0]["ratio"] == "1/3"


def test_decompose_scalar():
    dec = decompose(2.0 * np.eye(3), 2.0)
    assert dec.k == 1 and dec.frequencies == pytest.approx([2.0])
    np.testing.assert_allclose(dec.projections[0], np.eye(3))


def test_decompose_zero_base():
    dec = decompose(np.zeros((2, 2)), 0.0)
    assert dec.k == 1 and dec.frequencies == [0.0] and dec.distance == 0.0


def test_decompose_rejects_distance_two():
    with pytest.raises(HypothesisNotMetError):
        decompose(np.diag([1.0, 2.0]), 1.0)
    with pytest.raises(HypothesisNotMetError):
        decompose(np.diag([1.0, math.sqrt(2.0)]), 1.0)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0.3, 3.0),
       st.lists(st.sampled_from([(1, 1), (1, 3), (3, 1), (1, 5), (5, 1), (3, 5), (5, 3)]),
                min_size=1, max_size=4))
def test_decompose_consistency(seed, a, ratios):
    rng = np.random.default_rng(seed)
    diag = [a * p / q for p, q in ratios]
    A = conjugated_diagonal(rng, diag, 2.0)
    try:
        dec = decompose(A, a)
    except HypothesisNotMetError:
        return
    assert dec.k == len(set(ratios))
    assert dec.residual <= 1e-8
    budget = dec.distance + 1e-9
    if dec.omega_complete:
        om = enumerate_omega(a, budget)
        assert all(b in om for b in dec.frequencies)
        assert dec.k <= len(om)
    else:
        # Omega itself is too large to list; check membership pair by pair
        assert candidate_bound(min(budget, math.nextafter(2.0, 0.0))) > 99
        for b in dec.frequencies:
            assert scalar_distance(a, b).value <= budget + 1e-12
    if dec.distance < OPTIMAL_CONSTANT - 1e-9:
        assert dec.k == 1 and dec.frequencies[0] == pytest.approx(a)


def test_decompose_near_distance_two():
    # a distance this close to 2 needs Omega candidates past the degree cap
    A = conjugated_diagonal(np.random.default_rng(28), [1.0, 5.0 / 3.0, 5.0], 2.0)
    dec = decompose(A, 1.0)
    assert 1.99 < dec.distance < 2.0 and dec.k == 3
    assert not dec.omega_complete
    assert [str(r) for r in dec.omega] == ["1", "5/3", "5"]


def test_rigidity_examples():
    rep = rigidity_check(np.eye(3), 1.0)
    assert rep.distance == 0.0 and rep.forced_scalar and rep.asserted
    rep = rigidity_check(np.diag([1.0, 3.0]), 1.0)
    assert rep.distance == pytest.approx(OPTIMAL_CONSTANT, abs=1e-9)
    assert not rep.asserted and not rep.forced_scalar
    rep = rigidity_check(np.diag([1.0, 5.0 / 3.0]), 1.0)
    assert rep.distance == pytest.approx(V35, abs=1e-9)
    assert rep.distance > OPTIMAL_CONSTANT and not rep.forced_scalar


def test_rigidity_conjugated_scalar():
    rng = np.random.default_rng(17)
    for _ in range(10):
        A = conjugated_diagonal(rng, rng.choice([1.0, -1.0], size=4))
        rep = rigidity_check(A, 1.0)
        assert rep.distance < 1e-8 and rep.forced_scalar


def test_probe_examples():
    rep = boundedness_probe(np.diag([1.0, 3.0]), 100.0)
    assert rep.sup_norm <= 1 + 1e-10 and not rep.growing
    rep = boundedness_probe(JORDAN, 100.0)
    assert rep.growing
    rep = boundedness_probe(np.zeros((2, 2)), 10.0)
    assert rep.sup_norm == 1.0 and not rep.growing


@pytest.mark.parametrize("n", [2, 3, 4])
def test_probe_flags_jordan_blocks(n):
    J = np.eye(n) + np.diag(np.ones(n - 1), 1)
    assert boundedness_probe(J, 100.0).growing
