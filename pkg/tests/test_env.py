import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from barlab.env import (
    BernoulliInstance,
    PullStats,
    RngStream,
    expected_gap,
    hard_instance,
    instance_from_spec,
    sample,
    sample_batch,
)


class TestBernoulliInstance:
    def test_accessors(self):
        inst = BernoulliInstance(means=np.array([0.2, 0.9, 0.5]))
        assert inst.n == 3
        assert inst.best_arm == 2
        assert inst.best_mean == 0.9
        np.testing.assert_allclose(inst.gaps, [0.7, 0.0, 0.4])

    def test_best_arm_tie_lowest_label(self):
        inst = BernoulliInstance(means=np.array([0.5, 0.9, 0.9]))
        assert inst.best_arm == 2

    def test_rejects_out_of_range_means(self):
        with pytest.raises(ValueError):
            BernoulliInstance(means=np.array([0.5, 1.2]))
        with pytest.raises(ValueError):
            BernoulliInstance(means=np.array([-0.1]))
        with pytest.raises(ValueError):
            BernoulliInstance(means=np.array([]))

    def test_means_are_immutable(self):
        inst = BernoulliInstance(means=np.array([0.5]))
        with pytest.raises(ValueError):
            inst.means[0] = 0.9


class TestSample:
    def test_degenerate_means(self):
        ones = BernoulliInstance(means=np.array([1.0]))
        zeros = BernoulliInstance(means=np.array([0.0]))
        rng = RngStream(1, 0)
        assert all(sample(ones, 1, rng) == 1 for _ in range(100))
        assert all(sample(zeros, 1, rng) == 0 for _ in range(100))

    def test_fair_coin_mean(self):
        # binomial 3-sigma band: 3*sqrt(0.25/1e5) ~ 0.0047 < 0.01
        inst = BernoulliInstance(means=np.array([0.5]))
        rng = RngStream(7, 3)
        draws = [sample(inst, 1, rng) for _ in range(100_000)]
        assert abs(np.mean(draws) - 0.5) < 0.01

    def test_arm_out_of_range(self):
        inst = BernoulliInstance(means=np.array([0.5]))
        with pytest.raises(ValueError):
            sample(inst, 0, RngStream(1, 0))
        with pytest.raises(ValueError):
            sample(inst, 2, RngStream(1, 0))

    def test_reproducible_stream(self):
        inst = BernoulliInstance(means=np.array([0.3, 0.6]))

        def draws(stream_id):
            rng = RngStream(99, stream_id)
            return [sample(inst, 1, rng) for _ in range(50)]

        assert draws(5) == draws(5)
        assert draws(5) != draws(6)

    def test_batch_matches_binomial_distribution(self):
        inst = BernoulliInstance(means=np.array([0.25]))
        rng = RngStream(3, 0)
        total = sample_batch(inst, 1, 10_000, rng)
        assert abs(total / 10_000 - 0.25) < 0.015
        assert sample_batch(inst, 1, 0, RngStream(3, 1)) == 0


class TestHardInstance:
    def test_base_instance(self):
        np.testing.assert_allclose(hard_instance(4, 0.1).means, [0.6, 0.5, 0.5, 0.5])

    def test_perturbed_instance(self):
        np.testing.assert_allclose(hard_instance(4, 0.1, 3).means, [0.6, 0.5, 0.7, 0.5])

    def test_zero_gap_edge(self):
        np.testing.assert_allclose(hard_instance(2, 0.0, 2).means, [0.5, 0.5])

    def test_j_one_rejected(self):
        with pytest.raises(ValueError):
            hard_instance(4, 0.1, 1)

    def test_warns_above_eighth(self):
        with pytest.warns(UserWarning):
            hard_instance(4, 0.2)

    def test_means_leaving_unit_interval_rejected(self):
        with pytest.warns(UserWarning):
            with pytest.raises(ValueError):
                hard_instance(4, 0.3, 2)  # 0.5 + 0.6 > 1

    @given(
        n=st.integers(2, 30),
        eps=st.floats(0.0, 0.125),
        j=st.integers(2, 30),
    )
    @settings(max_examples=100)
    def test_perturbation_differs_in_one_coordinate(self, n, eps, j):
        if j > n:
            j = 2 + (j % (n - 1))
        base = hard_instance(n, eps)
        perturbed = hard_instance(n, eps, j)
        diff = np.flatnonzero(base.means != perturbed.means)
        if 0.5 + 2 * eps == 0.5:  # below half an ulp the shift vanishes
            assert diff.size == 0
        else:
            assert diff.tolist() == [j - 1]
            assert perturbed.means[j - 1] == 0.5 + 2 * eps


class TestExpectedGap:
    def test_best_retained(self):
        assert expected_gap(hard_instance(4, 0.1), {1, 2}) == 0.0

    def test_best_missing(self):
        assert expected_gap(hard_instance(4, 0.1), {2, 3}) == pytest.approx(0.1)

    def test_all_arms(self):
        inst = BernoulliInstance(means=np.array([0.1, 0.8, 0.4]))
        assert expected_gap(inst, [1, 2, 3]) == 0.0

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            expected_gap(hard_instance(4, 0.1), [])

    def test_duplicate_rejected(self):
        with pytest.raises(ValueError):
            expected_gap(hard_instance(4, 0.1), [2, 2])


class TestPullStats:
    def test_regret_accounting(self):
        inst = BernoulliInstance(means=np.array([0.6, 0.5, 0.4]))
        stats = PullStats(pulls=np.array([10, 5, 2]), cumulative_reward=9.0, rounds=17)
        assert stats.realized_regret(inst) == pytest.approx(5 * 0.1 + 2 * 0.2)

    def test_rounds_must_match_pulls(self):
        with pytest.raises(ValueError):
            PullStats(pulls=np.array([3, 2]), rounds=4)

    def test_addition(self):
        a = PullStats(pulls=np.array([1, 0]), cumulative_reward=1.0, rounds=1)
        b = PullStats(pulls=np.array([2, 3]), cumulative_reward=2.5, rounds=5)
        c = a + b
        assert c.pulls.tolist() == [3, 3]
        assert c.rounds == 6
        assert c.cumulative_reward == 3.5


class TestInstanceFromSpec:
    def test_explicit_list(self):
        inst = instance_from_spec([0.2, 0.7])
        np.testing.assert_allclose(inst.means, [0.2, 0.7])

    def test_family_dict(self):
        inst = instance_from_spec({"family": "H", "n": 4, "eps": 0.1, "j": 3})
        np.testing.assert_allclose(inst.means, [0.6, 0.5, 0.7, 0.5])

    def test_family_without_j(self):
        inst = instance_from_spec({"family": "H", "n": 3, "eps": 0.05})
        np.testing.assert_allclose(inst.means, [0.55, 0.5, 0.5])

    def test_unknown_keys_rejected(self):
        with pytest.raises(ValueError):
            instance_from_spec({"family": "H", "n": 3, "eps": 0.05, "bogus": 1})

    def test_unknown_family_rejected(self):
        with pytest.raises(ValueError):
            instance_from_spec({"family": "G", "n": 3, "eps": 0.05})


class TestRngStream:
    def test_same_key_same_sequence(self):
        a = RngStream(123, 7).generator.random(100)
        b = RngStream(123, 7).generator.random(100)
        np.testing.assert_array_equal(a, b)

    def test_distinct_streams_differ(self):
        a = RngStream(123, 7).generator.random(100)
        b = RngStream(123, 8).generator.random(100)
        assert not np.array_equal(a, b)

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            RngStream(-1, 0)
        with pytest.raises(ValueError):
            RngStream(0, 2**64)

    def test_spawn(self):
        base = RngStream(5, 0)
        child = base.spawn(9)
        assert child.seed == 5 and child.stream_id == 9
