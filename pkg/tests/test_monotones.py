"""Closed-form monotones, their structural checks, and the concurrence oracle."""

import numpy as np
import pytest

from qduality.measures import get_pair, registry
from qduality.monotones import (
    check_local_unitary_invariance,
    check_schur_concavity,
    monotone_pure,
    s_l,
    s_vn,
    w_l1,
    w_wy,
    wootters_concurrence,
)
from qduality.sampling import SeededStream, haar_bipartite, haar_unitary, random_simplex
from qduality.states import BipartitePureState, _trusted_density, validate_density_matrix

BELL = BipartitePureState(2, 2, np.array([1, 0, 0, 1]) / np.sqrt(2))


def werner(p):
    bell = np.zeros(4)
    bell[0] = bell[3] = 1 / np.sqrt(2)
    return validate_density_matrix(p * np.outer(bell, bell) + (1 - p) * np.eye(4) / 4)


class TestClosedForms:
    def test_frozen_values(self):
        np.testing.assert_allclose(s_vn([0.5, 0.5]), 1.0, atol=1e-14)
        np.testing.assert_allclose(s_vn([1.0, 0.0]), 0.0, atol=1e-14)
        np.testing.assert_allclose(s_vn([0.8, 0.2]), 0.7219280948873623, atol=1e-13)
        np.testing.assert_allclose(s_l([0.5, 0.5]), 0.5, atol=1e-14)
        np.testing.assert_allclose(s_l([1.0, 0.0]), 0.0, atol=1e-14)
        np.testing.assert_allclose(s_l([0.8, 0.2]), 0.32, atol=1e-14)
        np.testing.assert_allclose(w_l1([0.5, 0.5]), 1.0, atol=1e-14)
        np.testing.assert_allclose(w_l1([1.0, 0.0]), 0.0, atol=1e-14)
        np.testing.assert_allclose(w_l1([0.8, 0.2]), 0.8, atol=1e-14)
        np.testing.assert_allclose(w_wy([0.5, 0.5]), 0.5, atol=1e-14)
        np.testing.assert_allclose(w_wy([0.8, 0.2]), 0.32, atol=1e-14)

    def test_batched_evaluation(self):
        lam = np.array([[0.5, 0.5], [0.8, 0.2]])
        np.testing.assert_allclose(s_vn(lam), [1.0, 0.7219280948873623], atol=1e-13)
        np.testing.assert_allclose(w_l1(lam), [1.0, 0.8], atol=1e-13)

    def test_robustness_identity(self):
        # w_l1 equals (sum sqrt(lam))^2 - 1 on the simplex
        for d in (2, 3, 4, 5, 6):
            stream = SeededStream(200 + d)
            for k in range(2000):
                lam = np.asarray(random_simplex(d, stream.child(k)))
                expected = np.square(np.sqrt(lam).sum()) - 1.0
                assert abs(float(w_l1(lam)) - expected) < 1e-12

    def test_w_wy_equals_s_l_on_simplex(self):
        stream = SeededStream(210)
        for k in range(500):
            lam = np.asarray(random_simplex(4, stream.child(k)))
            assert float(w_wy(lam)) == pytest.approx(float(s_l(lam)), abs=1e-15)

    def test_permutation_invariance_exhaustive(self):
        import itertools

        for d in (2, 3, 4):
            lam = np.asarray(random_simplex(d, SeededStream(220 + d)))
            for fn in (s_vn, s_l, w_l1, w_wy):
                base = float(fn(lam))
                for perm in itertools.permutations(range(d)):
                    assert abs(float(fn(lam[list(perm)])) - base) < 1e-12


class TestMonotonePure:
    def test_bell_and_product(self):
        assert monotone_pure(get_pair("vn"), BELL).value == pytest.approx(1.0, abs=1e-12)
        product = BipartitePureState(2, 2, [0, 0, 1, 0])
        for pair in registry():
            assert monotone_pure(pair, product).value == pytest.approx(0.0, abs=1e-12)

    def test_frozen_schmidt_values(self):
        psi = BipartitePureState(2, 2, [np.sqrt(0.8), 0, 0, np.sqrt(0.2)])
        expected = {"s_vn": 0.7219280948873623, "s_l": 0.32, "w_l1": 0.8, "w_wy": 0.32}
        for pair in registry():
            mv = monotone_pure(pair, psi)
            assert mv.value == pytest.approx(expected[mv.name], abs=1e-12)
            assert mv.normalized == pytest.approx(mv.value / pair.alpha(2), abs=1e-12)

    def test_matches_schmidt_closed_form(self):
        from qduality.monotones import MONOTONES
        from qduality.states import schmidt_decompose

        for d in (2, 3):
            stream = SeededStream(230 + d)
            for k in range(500):
                psi = haar_bipartite(d, d, stream.child(k))
                lam = np.asarray(schmidt_decompose(psi).coefficients)
                for pair in registry():
                    closed = float(MONOTONES[pair.monotone_name](lam))
                    assert abs(monotone_pure(pair, psi).value - closed) < 1e-9

    def test_maximal_at_uniform_schmidt(self):
        for d in (2, 3, 4):
            amps = np.zeros(d * d)
            amps[:: d + 1] = 1 / np.sqrt(d)
            maximally_entangled = BipartitePureState(d, d, amps)
            for pair in registry():
                mv = monotone_pure(pair, maximally_entangled)
                assert abs(mv.value - pair.alpha(d)) < 1e-10

    def test_concavity_on_diagonal_states(self):
        grid = np.linspace(0, 1, 11)
        stream = SeededStream(240)
        for k in range(300):
            p = np.asarray(random_simplex(3, stream.child(2 * k)))
            q = np.asarray(random_simplex(3, stream.child(2 * k + 1)))
            for pair in registry():
                def f(lam):
                    rho = _trusted_density(np.diag(lam).astype(complex), np.sort(lam)[::-1])
                    return pair.alpha(3) - pair.predictability(rho) - pair.visibility(rho)

                fp, fq = f(p), f(q)
                for t in grid:
                    assert f(t * p + (1 - t) * q) >= t * fp + (1 - t) * fq - 1e-9


class TestLocalUnitaryInvariance:
    def test_bell_and_product_exact(self):
        stream = SeededStream(250)
        ua, ub = haar_unitary(2, stream.child(0)), haar_unitary(2, stream.child(1))
        for psi in (BELL, BipartitePureState(2, 2, [1, 0, 0, 0])):
            for pair in registry():
                rep = check_local_unitary_invariance(pair, psi, ua, ub)
                assert rep.passed

    def test_monte_carlo(self):
        stream = SeededStream(260)
        psi = haar_bipartite(3, 3, stream.child(0))
        worst = 0.0
        for k in range(100):
            ua = haar_unitary(3, stream.child(2 * k + 1))
            ub = haar_unitary(3, stream.child(2 * k + 2))
            for pair in registry():
                rep = check_local_unitary_invariance(pair, psi, ua, ub)
                worst = max(worst, rep.deviation)
        assert worst <= 1e-9


class TestSchurConcavity:
    def test_builtins_pass(self):
        for name in ("s_vn", "s_l", "w_l1", "w_wy"):
            rep = check_schur_concavity(name, trials=2000, dim=4, seed=7)
            assert rep.passed, (name, rep.worst_violation)

    def test_schur_convex_function_fails_with_counterexample(self):
        purity = lambda lam: float(np.sum(np.square(lam)))
        rep = check_schur_concavity(purity, trials=2000, dim=4, seed=7)
        assert not rep.passed
        p, q = rep.counterexample
        from qduality.states import majorizes

        assert majorizes(q, p)
        assert purity(q) - purity(p) > 1e-10


class TestWoottersConcurrence:
    def test_bell_projector(self):
        assert wootters_concurrence(BELL.projector()) == pytest.approx(1.0, abs=1e-12)

    def test_separable_product(self):
        rho = validate_density_matrix(np.diag([0.4, 0.1, 0.4, 0.1]))
        assert wootters_concurrence(rho) == pytest.approx(0.0, abs=1e-12)

    def test_werner_closed_form(self):
        # concurrence of a Werner state is max(0, (3p-1)/2)
        assert wootters_concurrence(werner(0.9)) == pytest.approx(0.85, abs=1e-12)
        assert wootters_concurrence(werner(0.2)) == pytest.approx(0.0, abs=1e-12)
        assert wootters_concurrence(werner(1 / 3)) == pytest.approx(0.0, abs=1e-9)

    def test_dimension_guard(self):
        with pytest.raises(ValueError):
            wootters_concurrence(validate_density_matrix(np.eye(2) / 2))
