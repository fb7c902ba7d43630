import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from genbound.core import (
    DiscreteDistribution,
    DimensionMismatch,
    EvaluatedClass,
    ExactEnumerationLimit,
    InvariantViolation,
    Sample,
    SignAssignment,
    deterministic_sum,
    draw_words,
    enumerate_product,
    enumerate_signs,
    gaussian_sampler,
    sign_block,
    sphere_sampler,
    uniform_box_sampler,
    words_to_signs,
    words_to_uniforms,
)


class TestEnumerateSigns:
    def test_base_case(self):
        vectors = {tuple(a.vector()) for a in enumerate_signs(1)}
        assert vectors == {(1,), (-1,)}

    def test_cardinality_and_distinctness(self):
        seen = set()
        for assignment in enumerate_signs(3):
            seen.add(tuple(assignment.vector()))
        assert len(seen) == 8

    def test_ascending_bit_word_order(self):
        words = [a.bits for a in enumerate_signs(4)]
        assert words == sorted(words)

    def test_cap_names_limit(self):
        with pytest.raises(ExactEnumerationLimit, match="20"):
            list(enumerate_signs(21, cap=20))

    def test_entries_are_pm_one(self):
        for assignment in enumerate_signs(5):
            assert set(np.unique(assignment.vector())) <= {-1, 1}

    def test_matches_sign_block(self):
        block = sign_block(3, 0, 8)
        for word, assignment in enumerate(enumerate_signs(3)):
            assert np.array_equal(block[word], assignment.vector().astype(float))


class TestEnumerateProduct:
    def test_uniform_product(self):
        dist = DiscreteDistribution([0.0, 1.0], [0.5, 0.5])
        items = list(enumerate_product(dist, 2))
        assert len(items) == 4
        assert all(w == 0.25 for _idx, w in items)

    def test_identity_case(self):
        dist = DiscreteDistribution([3.0, 5.0], [0.3, 0.7])
        items = list(enumerate_product(dist, 1))
        assert [idx for idx, _w in items] == [(0,), (1,)]
        assert [w for _idx, w in items] == pytest.approx([0.3, 0.7])

    def test_weight_of_heavy_pair(self):
        dist = DiscreteDistribution([0.0, 1.0], [0.3, 0.7])
        weights = dict(enumerate_product(dist, 2))
        assert weights[(1, 1)] == pytest.approx(0.49, abs=1e-15)

    def test_cap(self):
        dist = DiscreteDistribution([0.0, 1.0, 2.0], [0.2, 0.3, 0.5])
        with pytest.raises(ExactEnumerationLimit, match="8"):
            list(enumerate_product(dist, 2, cap=8))

    @given(st.integers(2, 4), st.integers(1, 4), st.integers(0, 10_000))
    def test_weights_sum_to_one(self, size, n, seed):
        rng = np.random.default_rng(seed)
        probs = rng.uniform(0.05, 1.0, size)
        probs /= probs.sum()
        dist = DiscreteDistribution(np.arange(size, dtype=float), probs)
        total = math.fsum(w for _idx, w in enumerate_product(dist, n))
        assert abs(total - 1.0) <= 1e-10


class TestDeterministicSum:
    def test_simple(self):
        assert deterministic_sum([1.0, 2.0, 3.0]) == 6.0

    def test_empty_convention(self):
        assert deterministic_sum([]) == 0.0

    def test_against_compensated_oracle(self):
        values = np.full(10**6, 0.1)
        exact = math.fsum(values)
        assert abs(deterministic_sum(values) - exact) / exact <= 1e-9

    @given(st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=200), st.integers(1, 7))
    def test_chunk_count_insensitive(self, values, pieces):
        arr = np.asarray(values)
        cuts = np.linspace(0, arr.size, pieces + 1).astype(int)
        chunks = [arr[a:b] for a, b in zip(cuts[:-1], cuts[1:])]
        rejoined = np.concatenate([c for c in chunks if c.size]) if arr.size else arr
        assert deterministic_sum(rejoined) == deterministic_sum(arr)


class TestDomainTypes:
    def test_sample_requires_points(self):
        with pytest.raises(InvariantViolation):
            Sample([])

    def test_sample_rejects_ragged(self):
        with pytest.raises(DimensionMismatch):
            Sample([[1.0, 2.0], [3.0]])

    def test_sample_dimensions(self):
        assert Sample([1.0, 2.0]).n == 2
        assert Sample([[1.0, 2.0]]).point_dim == 2

    def test_distribution_validates_sum(self):
        with pytest.raises(InvariantViolation):
            DiscreteDistribution([0.0, 1.0], [0.6, 0.6])

    def test_distribution_rejects_negative(self):
        with pytest.raises(InvariantViolation):
            DiscreteDistribution([0.0, 1.0], [1.5, -0.5])

    def test_distribution_expectation(self):
        dist = DiscreteDistribution([0.0, 1.0], [0.25, 0.75])
        assert dist.expectation(np.array([0.0, 1.0])) == pytest.approx(0.75)
        rows = dist.expectation(np.array([[0.0, 1.0], [2.0, 2.0]]))
        assert rows == pytest.approx([0.75, 2.0])

    def test_sign_assignment_range(self):
        with pytest.raises(InvariantViolation):
            SignAssignment(8, 3)

    def test_evaluated_class_envelope(self):
        with pytest.raises(InvariantViolation):
            EvaluatedClass([[2.0]], 1.0)

    def test_evaluated_class_unchecked_escape(self):
        cls = EvaluatedClass([[2.0]], 1.0, validate=False)
        assert cls.envelope_b == 1.0

    def test_evaluated_class_means_length(self):
        with pytest.raises(DimensionMismatch):
            EvaluatedClass([[0.5]], 1.0, [0.1, 0.2])

    def test_evaluated_class_means_bound(self):
        with pytest.raises(InvariantViolation):
            EvaluatedClass([[0.5]], 1.0, [1.5])

    def test_arrays_immutable(self):
        cls = EvaluatedClass([[0.5, -0.5]], 1.0)
        with pytest.raises(ValueError):
            cls.evals[0, 0] = 0.0


class TestRandomness:
    def test_draw_words_chunking_matches_full(self):
        full = draw_words(7, 0, 10, 5)
        parts = np.vstack([draw_words(7, 0, 3, 5), draw_words(7, 3, 7, 5)])
        assert np.array_equal(full, parts)

    def test_uniform_range(self):
        u = words_to_uniforms(draw_words(3, 0, 100, 4).ravel())
        assert np.all((0.0 <= u) & (u < 1.0))

    def test_signs_are_pm_one(self):
        s = words_to_signs(draw_words(3, 0, 100, 4).ravel())
        assert set(np.unique(s)) <= {-1.0, 1.0}

    def test_seed_changes_stream(self):
        assert not np.array_equal(draw_words(1, 0, 4, 4), draw_words(2, 0, 4, 4))

    def test_samplers_deterministic_and_chunkable(self):
        for sampler in (
            uniform_box_sampler([-1.0, 0.0], [1.0, 2.0]),
            gaussian_sampler(3),
            sphere_sampler(3, radius=2.0),
        ):
            full = sampler.draw(11, 0, 8)
            again = sampler.draw(11, 0, 8)
            parts = np.vstack([sampler.draw(11, 0, 5), sampler.draw(11, 5, 3)])
            assert np.array_equal(full, again)
            assert np.array_equal(full, parts)

    def test_sphere_sampler_norms(self):
        pts = sphere_sampler(4, radius=2.0).draw(5, 0, 200)
        norms = np.linalg.norm(pts, axis=1)
        assert np.allclose(norms, 2.0, atol=1e-9)

    def test_box_sampler_bounds(self):
        pts = uniform_box_sampler([-1.0], [3.0]).draw(5, 0, 500)
        assert np.all((pts >= -1.0) & (pts < 3.0))

    def test_discrete_sampler_hits_support(self):
        dist = DiscreteDistribution([2.0, 4.0, 8.0], [0.2, 0.3, 0.5])
        pts = dist.sampler().draw(9, 0, 300)
        assert set(np.unique(pts)) <= {2.0, 4.0, 8.0}

    def test_index_trials_chunking(self):
        dist = DiscreteDistribution([0.0, 1.0, 2.0], [0.1, 0.4, 0.5])
        full = dist.draw_index_trials(13, 0, 10, 4)
        parts = np.vstack(
            [dist.draw_index_trials(13, 0, 4, 4), dist.draw_index_trials(13, 4, 6, 4)]
        )
        assert np.array_equal(full, parts)
