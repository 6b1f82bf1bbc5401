import numpy as np
import pytest

from pathcoh.discrimination import (
    CERT_THRESHOLD,
    DiscriminationResult,
    Ensemble,
    Povm,
    accessible_info_lower,
    certificate_gap,
    helstrom,
    holevo,
    min_error_solve,
    mutual_information,
    pairwise_bound,
    pretty_good_measurement,
    success_probability,
)
from pathcoh.sampling import haar_state

RNG = np.random.default_rng(11)


def random_ensemble(rng, n, d):
    p = rng.dirichlet(np.ones(n))
    states = np.array([haar_state(rng, d) for _ in range(n)])
    return Ensemble(p, states)


def two_state(p1, overlap):
    """Two real states in the plane with the given |<phi_1|phi_2>|."""
    theta = np.arccos(overlap)
    states = np.array([[1.0, 0.0], [np.cos(theta), np.sin(theta)]], dtype=complex)
    return Ensemble(np.array([p1, 1 - p1]), states)


def trine():
    angles = [0.0, 2 * np.pi / 3, 4 * np.pi / 3]
    states = np.array([[np.cos(a), np.sin(a)] for a in angles], dtype=complex)
    return Ensemble(np.full(3, 1 / 3), states)


class TestEnsemblePovm:
    def test_ensemble_validation(self):
        with pytest.raises(ValueError):
            Ensemble(np.array([0.5, 0.6]), np.eye(2, dtype=complex))
        with pytest.raises(ValueError):
            Ensemble(np.array([0.5, 0.5]), 2 * np.eye(2, dtype=complex))

    def test_average_state(self):
        e = trine()
        rho = e.average_state()
        assert np.max(np.abs(rho - np.eye(2) / 2)) <= 1e-12

    def test_povm_validation(self):
        with pytest.raises(ValueError):
            Povm((np.eye(2), np.eye(2)))
        with pytest.raises(ValueError):
            Povm((np.diag([1.5, 1.0]), np.diag([-0.5, 0.0])))
        Povm((np.eye(2) / 2, np.eye(2) / 2))


class TestSuccessProbability:
    def test_projective_on_orthonormal(self):
        e = Ensemble(np.array([0.4, 0.6]), np.eye(2, dtype=complex))
        m = Povm((np.diag([1.0, 0.0]), np.diag([0.0, 1.0])))
        assert success_probability(e, m) == pytest.approx(1.0, abs=1e-12)

    def test_swapped_projectors(self):
        e = Ensemble(np.array([0.4, 0.6]), np.eye(2, dtype=complex))
        m = Povm((np.diag([0.0, 1.0]), np.diag([1.0, 0.0])))
        assert success_probability(e, m) == pytest.approx(0.0, abs=1e-12)

    def test_trace_oracle(self):
        # P_s = sum_i p_i Tr(rho_i Pi_i), computed via explicit traces.
        for s in range(100):
            rng = np.random.default_rng(s)
            e = random_ensemble(rng, 3, 3)
            m = pretty_good_measurement(e)
            want = sum(
                e.probs[i] * np.trace(np.outer(e.states[i], e.states[i].conj())
                                      @ m.elements[i]).real
                for i in range(3))
            assert success_probability(e, m) == pytest.approx(want, abs=1e-12)

    def test_too_few_outcomes(self):
        e = trine()
        with pytest.raises(ValueError):
            success_probability(e, Povm((np.eye(2),)))


class TestHelstrom:
    def test_frozen_symmetric_case(self):
        # p = 1/2 each, overlap 1/sqrt(2): P_s = 1/2 + 1/(2 sqrt 2) = 0.85355339
        res = helstrom(two_state(0.5, 1 / np.sqrt(2)))
        assert res.p_success == pytest.approx(0.8535533905932737, abs=1e-12)
        assert res.certified

    def test_identical_states(self):
        e = Ensemble(np.array([0.9, 0.1]),
                     np.array([[1, 0], [1, 0]], dtype=complex))
        res = helstrom(e)
        assert res.p_success == pytest.approx(0.9, abs=1e-12)
        assert success_probability(e, res.povm) == pytest.approx(0.9, abs=1e-10)

    def test_orthogonal_states(self):
        res = helstrom(Ensemble(np.array([0.3, 0.7]), np.eye(2, dtype=complex)))
        assert res.p_success == pytest.approx(1.0, abs=1e-12)
        assert res.certified

    def test_povm_achieves_closed_form(self):
        for s in range(50):
            rng = np.random.default_rng(s)
            e = random_ensemble(rng, 2, 3)
            res = helstrom(e)
            assert success_probability(e, res.povm) == pytest.approx(
                res.p_success, abs=1e-10)
            assert res.certificate_gap <= 1e-9

    def test_beats_projective_grid(self):
        # Brute force over a parametrized family of 2-outcome projective
        # measurements in the span never beats the closed form.
        e = two_state(0.35, 0.6)
        best = 0.0
        for theta in np.linspace(0, np.pi, 721):
            v = np.array([np.cos(theta), np.sin(theta)], dtype=complex)
            pi1 = np.outer(v, v.conj())
            m = Povm((pi1, np.eye(2) - pi1))
            best = max(best, success_probability(e, m))
        res = helstrom(e)
        assert best <= res.p_success + 1e-12
        assert best == pytest.approx(res.p_success, abs=1e-5)

    def test_rejects_wrong_count(self):
        with pytest.raises(ValueError):
            helstrom(trine())


class TestPairwiseBound:
    def test_two_state_equality(self):
        for s in range(30):
            rng = np.random.default_rng(s)
            e = random_ensemble(rng, 2, 2)
            assert pairwise_bound(e) == pytest.approx(
                helstrom(e).p_success, abs=1e-10)

    def test_orthonormal(self):
        e = Ensemble(np.full(3, 1 / 3), np.eye(3, dtype=complex))
        assert pairwise_bound(e) == pytest.approx(1.0, abs=1e-12)

    def test_dominates_solver(self):
        for s in range(20):
            rng = np.random.default_rng(400 + s)
            e = random_ensemble(rng, 3, 2)
            res = min_error_solve(e)
            assert res.p_success <= pairwise_bound(e) + 1e-8


class TestPrettyGoodMeasurement:
    def test_orthonormal_is_projective(self):
        e = Ensemble(np.full(3, 1 / 3), np.eye(3, dtype=complex))
        m = pretty_good_measurement(e)
        for i in range(3):
            want = np.zeros((3, 3))
            want[i, i] = 1.0
            assert np.max(np.abs(m.elements[i] - want)) <= 1e-10

    def test_symmetric_pair_is_optimal(self):
        # For two equiprobable states, the PGM (square-root measurement)
        # achieves the Helstrom optimum.
        e = two_state(0.5, 0.5)
        got = success_probability(e, pretty_good_measurement(e))
        assert got == pytest.approx(helstrom(e).p_success, abs=1e-10)

    def test_valid_and_better_than_guessing(self):
        for s in range(30):
            rng = np.random.default_rng(s)
            e = random_ensemble(rng, 3, 3)
            m = pretty_good_measurement(e)
            ps = success_probability(e, m)
            assert ps >= float(e.probs.max()) - 1e-9


class TestMinErrorSolve:
    def test_matches_helstrom(self):
        for s in range(25):
            rng = np.random.default_rng(s)
            e = random_ensemble(rng, 2, 2 + s % 2)
            res = min_error_solve(e)
            assert res.certified
            assert res.p_success == pytest.approx(
                helstrom(e).p_success, abs=1e-8)

    def test_trine_frozen(self):
        res = min_error_solve(trine())
        assert res.p_success == pytest.approx(2.0 / 3.0, abs=1e-8)
        assert res.certificate_gap <= CERT_THRESHOLD

    def test_random_ensembles_certified(self):
        for s in range(15):
            rng = np.random.default_rng(700 + s)
            n = 3 + s % 3
            e = random_ensemble(rng, n, rng.integers(2, n + 1))
            res = min_error_solve(e)
            assert res.certificate_gap <= CERT_THRESHOLD
            assert res.p_success <= pairwise_bound(e) + 1e-8
            assert res.p_success >= float(e.probs.max()) - 1e-9

    def test_certificate_upper_bounds_any_povm(self):
        # Optimal value certified: no other POVM does better.
        e = trine()
        res = min_error_solve(e)
        for s in range(20):
            rng = np.random.default_rng(s)
            u = np.linalg.qr(rng.standard_normal((2, 2))
                             + 1j * rng.standard_normal((2, 2)))[0]
            els = tuple(np.outer(u[:, k], u[:, k].conj()) for k in range(2))
            m = Povm(els + (np.zeros((2, 2), dtype=complex),))
            assert success_probability(e, m) <= res.p_success + 1e-7


class TestCertificateGap:
    def test_zero_at_optimum(self):
        e = two_state(0.5, 0.4)
        assert certificate_gap(e, helstrom(e).povm) <= 1e-12

    def test_positive_for_bad_povm(self):
        e = two_state(0.5, 0.0)  # orthogonal states
        swapped = Povm((np.diag([0.0, 1.0]), np.diag([1.0, 0.0])))
        assert certificate_gap(e, swapped) > 0.1


class TestInformation:
    def test_orthonormal_full_information(self):
        e = Ensemble(np.full(2, 0.5), np.eye(2, dtype=complex))
        m = Povm((np.diag([1.0, 0.0]), np.diag([0.0, 1.0])))
        assert mutual_information(e, m) == pytest.approx(1.0, abs=1e-10)

    def test_useless_measurement(self):
        e = two_state(0.5, 0.5)
        m = Povm((np.eye(2) / 2, np.eye(2) / 2))
        assert mutual_information(e, m) == pytest.approx(0.0, abs=1e-10)

    def test_holevo_values(self):
        e = Ensemble(np.full(2, 0.5), np.eye(2, dtype=complex))
        assert holevo(e) == pytest.approx(1.0, abs=1e-10)
        same = Ensemble(np.full(2, 0.5), np.array([[1, 0], [1, 0]], dtype=complex))
        assert holevo(same) == pytest.approx(0.0, abs=1e-10)

    def test_holevo_dominates_random_povms(self):
        for s in range(100):
            rng = np.random.default_rng(s)
            e = random_ensemble(rng, 3, 2)
            u = np.linalg.qr(rng.standard_normal((2, 2))
                             + 1j * rng.standard_normal((2, 2)))[0]
            m = Povm(tuple(np.outer(u[:, k], u[:, k].conj()) for k in range(2))
                     + (np.zeros((2, 2), dtype=complex),))
            assert mutual_information(e, m) <= holevo(e) + 1e-9


class TestAccessibleInfoLower:
    def test_orthonormal(self):
        e = Ensemble(np.full(2, 0.5), np.eye(2, dtype=complex))
        assert accessible_info_lower(e, restarts=0) == pytest.approx(1.0, abs=1e-8)

    def test_identical_states(self):
        e = Ensemble(np.full(2, 0.5), np.array([[1, 0], [1, 0]], dtype=complex))
        assert accessible_info_lower(e, restarts=1) == pytest.approx(0.0, abs=1e-8)

    def test_bracket_and_restart_monotonicity(self):
        for s in range(5):
            rng = np.random.default_rng(s)
            e = random_ensemble(rng, 3, 2)
            lo0 = accessible_info_lower(e, restarts=0, seed=7)
            lo2 = accessible_info_lower(e, restarts=2, seed=7)
            assert lo0 <= lo2 + 1e-12
            assert -1e-10 <= lo2 <= holevo(e) + 1e-9


class TestDiscriminationResult:
    def test_certified_flag(self):
        m = Povm((np.eye(2),))
        assert DiscriminationResult(1.0, m, 1e-8, 0).certified
        assert not DiscriminationResult(1.0, m, 1e-6, 0).certified
