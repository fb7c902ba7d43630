import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.stats import binom

from genbound.complexity import expected_rademacher
from genbound.concentration import (
    TailExperiment,
    clopper_pearson_lower,
    clopper_pearson_upper,
    high_probability_epsilon,
    mcdiarmid_bound,
    simulate_tail,
    verify_tail_bound,
)
from genbound.core import (
    DiscreteDistribution,
    InvalidDelta,
    InvalidEnvelope,
    InvariantViolation,
    MissingPopulationMeans,
)
from genbound.instances import DiscreteInstance, identity_instance, random_discrete_instance


def pm_one():
    return DiscreteDistribution([-1.0, 1.0], [0.5, 0.5])


class TestMcdiarmidBound:
    def test_zero_epsilon(self):
        assert mcdiarmid_bound(0.0, 5, 1.0) == 1.0

    def test_closed_form(self):
        assert mcdiarmid_bound(1.0, 2, 1.0) == pytest.approx(math.exp(-1.0), abs=1e-15)

    def test_inverse_pair(self):
        delta = 0.05
        eps = high_probability_epsilon(delta, 7, 2.0)
        assert mcdiarmid_bound(eps, 7, 2.0) == pytest.approx(delta, rel=1e-13)

    def test_invalid_envelope(self):
        with pytest.raises(InvalidEnvelope):
            mcdiarmid_bound(0.5, 3, 0.0)

    def test_monotonicities(self):
        eps_grid = np.linspace(0.1, 2.0, 8)
        values = [mcdiarmid_bound(e, 4, 1.0) for e in eps_grid]
        assert all(a > b for a, b in zip(values, values[1:]))
        n_values = [mcdiarmid_bound(0.5, n, 1.0) for n in (1, 2, 4, 8, 16)]
        assert all(a > b for a, b in zip(n_values, n_values[1:]))
        b_values = [mcdiarmid_bound(0.5, 4, b) for b in (0.5, 1.0, 2.0, 4.0)]
        assert all(a < b for a, b in zip(b_values, b_values[1:]))


class TestHighProbabilityEpsilon:
    def test_reference_point(self):
        assert high_probability_epsilon(1.0 / math.e, 2, 1.0) == pytest.approx(1.0, abs=1e-15)

    def test_monotone_decreasing_in_delta(self):
        deltas = np.linspace(0.01, 0.99, 12)
        values = [high_probability_epsilon(d, 5, 1.0) for d in deltas]
        assert all(a > b for a, b in zip(values, values[1:]))

    def test_linear_in_envelope(self):
        one = high_probability_epsilon(0.1, 6, 1.0)
        two = high_probability_epsilon(0.1, 6, 2.0)
        assert two == pytest.approx(2.0 * one, rel=1e-15)

    @pytest.mark.parametrize("delta", [0.0, 1.0, -0.3, 2.0])
    def test_invalid_delta(self, delta):
        with pytest.raises(InvalidDelta):
            high_probability_epsilon(delta, 3, 1.0)

    def test_round_trip_grid(self):
        for delta in np.exp(np.linspace(math.log(1e-6), math.log(0.5), 30)):
            eps = high_probability_epsilon(delta, 9, 1.5)
            back = mcdiarmid_bound(eps, 9, 1.5)
            assert abs(back - delta) / delta <= 1e-12


class TestClopperPearson:
    def test_edge_cases(self):
        assert clopper_pearson_lower(0, 100) == 0.0
        assert clopper_pearson_upper(100, 100) == 1.0

    def test_upper_dominates_frequency(self):
        for k in (0, 1, 17, 99, 100):
            assert clopper_pearson_upper(k, 100) >= k / 100

    def test_lower_below_frequency(self):
        for k in (1, 17, 99, 100):
            assert clopper_pearson_lower(k, 100) <= k / 100

    def test_against_binomial_tail_inversion(self):
        # at the upper CP bound, seeing <= k successes has probability 1 - conf
        k, trials, conf = 7, 200, 0.99
        upper = clopper_pearson_upper(k, trials, conf)
        assert binom.cdf(k, trials, upper) == pytest.approx(1.0 - conf, rel=1e-9)
        lower = clopper_pearson_lower(k, trials, conf)
        assert binom.sf(k - 1, trials, lower) == pytest.approx(1.0 - conf, rel=1e-9)


class TestSimulateTail:
    def test_constant_class_never_exceeds(self):
        dist = pm_one()
        inst = DiscreteInstance.from_table(np.full((2, 2), 0.25), 1.0, dist)
        exp = simulate_tail(inst.builder(), dist, 4, 0.1, 1000, 3, 0.0)
        assert exp.exceed_count == 0
        assert exp.theoretical > 0.0

    def test_identity_consistent_with_bound(self):
        inst = identity_instance(pm_one())
        rn = expected_rademacher(inst.builder(), inst.dist, 8)
        exp = simulate_tail(inst.builder(), inst.dist, 8, 0.5, 100_000, 11, rn.value, rademacher=rn)
        assert exp.empirical_freq <= exp.ci_upper
        assert verify_tail_bound(exp).passed

    def test_thread_count_invariance(self):
        inst = random_discrete_instance(4, m=3, support_size=3)
        rn = expected_rademacher(inst.builder(), inst.dist, 4)
        one = simulate_tail(inst.builder(), inst.dist, 4, 0.25, 20_000, 7, rn.value, threads=1)
        eight = simulate_tail(inst.builder(), inst.dist, 4, 0.25, 20_000, 7, rn.value, threads=8)
        assert one.exceed_count == eight.exceed_count

    def test_minimum_trials(self):
        inst = identity_instance(pm_one())
        with pytest.raises(InvariantViolation):
            simulate_tail(inst.builder(), inst.dist, 2, 0.1, 999, 0, 0.5)

    def test_requires_means(self):
        dist = pm_one()
        from genbound.core import EvaluatedClass

        def builder(indices):
            return EvaluatedClass(dist.support[list(indices)][None, :], 1.0)

        with pytest.raises(MissingPopulationMeans):
            simulate_tail(builder, dist, 2, 0.1, 1000, 0, 0.5)

    def test_sampler_path_matches_dist_path_semantics(self):
        inst = identity_instance(pm_one())
        rn = expected_rademacher(inst.builder(), inst.dist, 4)
        from genbound.core import EvaluatedClass

        def point_builder(points):
            pts = np.asarray(points, float).reshape(1, -1)
            return EvaluatedClass(pts, 1.0, [0.0])

        exp = simulate_tail(
            point_builder, inst.dist.sampler(), 4, 0.5, 2000, 21, rn.value
        )
        assert verify_tail_bound(exp).passed


class TestVerifyTailBound:
    def make_experiment(self, exceed, trials, theoretical):
        return TailExperiment(
            n=4,
            b=1.0,
            epsilon=0.5,
            trials=trials,
            seed=0,
            exceed_count=exceed,
            empirical_freq=exceed / trials,
            ci_upper=clopper_pearson_upper(exceed, trials),
            theoretical=theoretical,
            rademacher_value=0.0,
        )

    def test_zero_exceedances_pass(self):
        assert verify_tail_bound(self.make_experiment(0, 1000, 0.01)).passed

    def test_bound_not_violated_passes(self):
        assert verify_tail_bound(self.make_experiment(500, 1000, 0.9)).passed

    def test_significant_exceedance_fails(self):
        assert not verify_tail_bound(self.make_experiment(900, 1000, 0.1)).passed

    def test_invariants(self):
        with pytest.raises(InvariantViolation):
            TailExperiment(
                n=1, b=1.0, epsilon=0.1, trials=10, seed=0, exceed_count=5,
                empirical_freq=0.4, ci_upper=1.0, theoretical=0.5, rademacher_value=0.0,
            )

    @given(st.integers(0, 10**6), st.sampled_from([0.1, 0.25, 0.5]), st.sampled_from([2, 4]))
    def test_random_instances_respect_bound(self, seed, epsilon, n):
        inst = random_discrete_instance(seed, m=3, support_size=3)
        rn = expected_rademacher(inst.builder(), inst.dist, n)
        exp = simulate_tail(inst.builder(), inst.dist, n, epsilon, 2000, seed, rn.value)
        assert verify_tail_bound(exp).passed

    def test_hundred_instance_suite(self):
        rng = np.random.default_rng(99)
        for i in range(100):
            inst = random_discrete_instance(
                int(rng.integers(0, 2**32)),
                m=int(rng.integers(1, 7)),
                support_size=int(rng.integers(2, 4)),
            )
            n = int(rng.integers(1, 9))
            rn = expected_rademacher(inst.builder(), inst.dist, n)
            for epsilon in (0.1, 0.25, 0.5):
                exp = simulate_tail(
                    inst.builder(), inst.dist, n, epsilon, 2000, i, rn.value
                )
                assert verify_tail_bound(exp).passed
