import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from barlab.env import BernoulliInstance, RngStream, hard_instance
from barlab.osmd import (
    NumericError,
    OsmdConfig,
    SimplexDistribution,
    init_distribution,
    loss_estimate,
    mirror_step,
    run_osmd,
)
from barlab.verify import grid_minimize_mirror, grid_minimize_potential_3


def simplex(*weights):
    return SimplexDistribution(weights=np.array(weights))


class TestSimplexDistribution:
    def test_validates_sum(self):
        with pytest.raises(ValueError):
            simplex(0.5, 0.6)

    def test_validates_nonnegative(self):
        with pytest.raises(ValueError):
            simplex(1.2, -0.2)

    def test_accepts_boundary_zero(self):
        assert simplex(0.0, 1.0).k == 2


class TestInitDistribution:
    def test_singleton(self):
        np.testing.assert_array_equal(init_distribution(1).weights, [1.0])

    def test_uniform_four(self):
        np.testing.assert_array_equal(init_distribution(4).weights, [0.25] * 4)

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            init_distribution(0)

    def test_matches_potential_grid_argmin(self):
        # the symmetric strictly-convex potential bottoms out at uniform
        oracle = grid_minimize_potential_3(step=1e-3)
        np.testing.assert_allclose(init_distribution(3).weights, oracle, atol=2e-3)


class TestLossEstimate:
    def test_centered_corrections_vanish(self):
        q = simplex(0.5, 0.5)
        est = loss_estimate(q, 1, 0.5, 0.0, "paper-verbatim")
        np.testing.assert_array_equal(est, [0.0, 0.0])

    def test_paper_verbatim_direct_substitution(self):
        q = simplex(0.5, 0.5)
        eta = 0.1
        est = loss_estimate(q, 1, 1.0, eta, "paper-verbatim")
        denom = 0.5 + math.sqrt(0.5)
        tail = eta * 0.5 / (8 * denom)
        expected0 = (1.0 - 0.5 + (eta / 8) * (1 + 1 / denom)) - tail
        expected1 = -tail
        np.testing.assert_allclose(est, [expected0, expected1], rtol=0, atol=1e-15)

    def test_centered_divides_indicator_term_only(self):
        q = simplex(0.2, 0.8)
        eta = 0.3
        paper = loss_estimate(q, 1, 0.7, eta, "paper-verbatim")
        centered = loss_estimate(q, 1, 0.7, eta, "centered-importance-weighted")
        denom = 0.2 + math.sqrt(0.2)
        indicator_core = 0.7 - 0.5 + (eta / 8) * (1 + 1 / denom)
        assert centered[0] - paper[0] == pytest.approx(indicator_core / 0.2 - indicator_core)
        assert centered[1] == paper[1]  # trailing term untouched off the chosen arm

    def test_unbiasedness_at_zero_eta(self):
        # exhaustive expectation over (chosen arm, reward) outcomes
        means = np.array([0.3, 0.6, 0.9])
        q = simplex(0.2, 0.3, 0.5)
        for i in range(3):
            centered = 0.0
            verbatim = 0.0
            for a in range(3):
                for reward in (0, 1):
                    prob = q.weights[a] * (means[a] if reward else 1 - means[a])
                    loss = 1.0 - reward
                    centered += prob * loss_estimate(q, a + 1, loss, 0.0, "centered-importance-weighted")[i]
                    verbatim += prob * loss_estimate(q, a + 1, loss, 0.0, "paper-verbatim")[i]
            mean_loss = 1.0 - means[i]
            assert centered == pytest.approx(mean_loss - 0.5, abs=1e-12)
            assert verbatim == pytest.approx(q.weights[i] * (mean_loss - 0.5), abs=1e-12)

    def test_zero_weight_at_chosen_rejected(self):
        q = simplex(0.0, 1.0)
        with pytest.raises(NumericError):
            loss_estimate(q, 1, 0.5, 0.1)

    def test_validation(self):
        q = simplex(0.5, 0.5)
        with pytest.raises(ValueError):
            loss_estimate(q, 3, 0.5, 0.1)
        with pytest.raises(ValueError):
            loss_estimate(q, 1, 1.5, 0.1)
        with pytest.raises(ValueError):
            loss_estimate(q, 1, 0.5, 0.1, "bogus-variant")


class TestMirrorStep:
    def test_zero_estimate_is_identity(self):
        q = simplex(0.3, 0.2, 0.5)
        stepped = mirror_step(q, np.zeros(3), 0.5)
        np.testing.assert_allclose(stepped.weights, q.weights, atol=1e-9)

    def test_constant_estimate_absorbed(self):
        q = simplex(0.1, 0.6, 0.3)
        stepped = mirror_step(q, np.full(3, 2.5), 0.7)
        np.testing.assert_allclose(stepped.weights, q.weights, atol=1e-7)

    def test_zero_eta_returns_input(self):
        q = simplex(0.25, 0.75)
        stepped = mirror_step(q, np.array([5.0, -3.0]), 0.0)
        np.testing.assert_array_equal(stepped.weights, q.weights)

    def test_worked_example_against_grid_oracle(self):
        q = simplex(0.5, 0.5)
        est = np.array([1.0, 0.0])
        stepped = mirror_step(q, est, 0.1)
        assert stepped.weights[0] < 0.5 < stepped.weights[1]
        oracle = grid_minimize_mirror(q.weights, est, 0.1)
        np.testing.assert_allclose(stepped.weights, oracle, atol=1e-5)

    def test_three_arm_grid_oracle(self):
        q = simplex(0.2, 0.5, 0.3)
        est = np.array([-1.0, 2.0, 0.3])
        stepped = mirror_step(q, est, 0.4)
        oracle = grid_minimize_mirror(q.weights, est, 0.4)
        np.testing.assert_allclose(stepped.weights, oracle, atol=1e-5)

    def test_validation(self):
        q = simplex(0.5, 0.5)
        with pytest.raises(ValueError):
            mirror_step(simplex(0.0, 1.0), np.zeros(2), 0.1)  # zero weight
        with pytest.raises(ValueError):
            mirror_step(q, np.array([np.inf, 0.0]), 0.1)
        with pytest.raises(ValueError):
            mirror_step(q, np.zeros(3), 0.1)  # length mismatch
        with pytest.raises(ValueError):
            mirror_step(q, np.zeros(2), -0.1)

    @given(
        raw=st.lists(st.floats(0.01, 1.0), min_size=2, max_size=6),
        est_raw=st.lists(st.floats(-5.0, 5.0), min_size=2, max_size=6),
        eta=st.floats(0.001, 2.0),
    )
    @settings(max_examples=200, deadline=None)
    def test_simplex_invariants(self, raw, est_raw, eta):
        k = min(len(raw), len(est_raw))
        weights = np.array(raw[:k])
        q = SimplexDistribution(weights=weights / weights.sum())
        stepped = mirror_step(q, np.array(est_raw[:k]), eta)
        assert abs(float(stepped.weights.sum()) - 1.0) <= 1e-9
        assert float(stepped.weights.min()) > 0.0


class TestOsmdConfig:
    def test_default_eta_is_horizon_tuned(self):
        assert OsmdConfig().resolved_eta(10_000) == pytest.approx(math.sqrt(8 / 10_000))

    def test_explicit_eta_wins(self):
        assert OsmdConfig(eta=0.5).resolved_eta(100) == 0.5

    def test_validation(self):
        with pytest.raises(ValueError):
            OsmdConfig(eta=0.0)
        with pytest.raises(ValueError):
            OsmdConfig(estimator_variant="nope")
        with pytest.raises(ValueError):
            OsmdConfig(projection_tol=0.0)


class TestRunOsmd:
    def test_zero_rounds(self):
        inst = hard_instance(4, 0.1)
        stats = run_osmd([1, 2, 3, 4], 0, inst, OsmdConfig(), RngStream(1, 0))
        assert stats.rounds == 0
        assert stats.pulls.sum() == 0
        assert stats.realized_regret(inst) == 0.0

    def test_single_arm(self):
        inst = BernoulliInstance(means=np.array([0.4]))
        stats = run_osmd([1], 500, inst, OsmdConfig(), RngStream(1, 1))
        assert stats.pulls.tolist() == [500]
        assert stats.realized_regret(inst) == 0.0

    def test_subset_play_stays_in_subset(self):
        inst = hard_instance(6, 0.1)
        stats = run_osmd([2, 4, 5], 1000, inst, OsmdConfig(), RngStream(1, 2))
        assert stats.pulls.sum() == 1000
        assert stats.pulls[[0, 2, 5]].tolist() == [0, 0, 0]

    def test_deterministic_replay(self):
        inst = hard_instance(5, 0.1)
        a = run_osmd([1, 2, 3, 4, 5], 3000, inst, OsmdConfig(), RngStream(17, 9))
        b = run_osmd([1, 2, 3, 4, 5], 3000, inst, OsmdConfig(), RngStream(17, 9))
        np.testing.assert_array_equal(a.pulls, b.pulls)
        assert a.cumulative_reward == b.cumulative_reward

    def test_variants_differ(self):
        inst = hard_instance(5, 0.1)
        a = run_osmd([1, 2, 3, 4, 5], 2000, inst, OsmdConfig(estimator_variant="paper-verbatim"), RngStream(3, 0))
        b = run_osmd(
            [1, 2, 3, 4, 5], 2000, inst,
            OsmdConfig(estimator_variant="centered-importance-weighted"), RngStream(3, 0),
        )
        assert not np.array_equal(a.pulls, b.pulls)

    def test_validation(self):
        inst = hard_instance(3, 0.1)
        with pytest.raises(ValueError):
            run_osmd([], 10, inst, OsmdConfig(), RngStream(1, 0))
        with pytest.raises(ValueError):
            run_osmd([1, 1], 10, inst, OsmdConfig(), RngStream(1, 0))
        with pytest.raises(ValueError):
            run_osmd([4], 10, inst, OsmdConfig(), RngStream(1, 0))
        with pytest.raises(ValueError):
            run_osmd([1], -1, inst, OsmdConfig(), RngStream(1, 0))

    @pytest.mark.parametrize("n", [2, 5, 10])
    @pytest.mark.parametrize("rounds", [1_000, 10_000])
    def test_regret_bound_default_variant(self, n, rounds):
        # mean + 3*SE below sqrt(2nT) across the family grid
        inst = hard_instance(n, 0.1)
        arms = list(range(1, n + 1))
        regrets = []
        for trial in range(200):
            stats = run_osmd(arms, rounds, inst, OsmdConfig(), RngStream(1234, trial))
            regrets.append(stats.realized_regret(inst))
        arr = np.array(regrets)
        mean = arr.mean()
        se = arr.std(ddof=1) / math.sqrt(arr.size)
        assert mean + 3 * se <= math.sqrt(2 * n * rounds)


class TestVerifySuite:
    def test_all_checks_pass(self):
        from barlab.verify import check_osmd_properties

        results = check_osmd_properties(seed=0, triples_per_size=10)
        assert [r.name for r in results] == [
            "mirror-step-grid-oracle-2arm",
            "mirror-step-grid-oracle-3arm",
            "mirror-step-simplex-invariants",
            "uniform-start-potential-argmin",
            "run-determinism-same-stream",
        ]
        for result in results:
            assert result.passed, result.line()
