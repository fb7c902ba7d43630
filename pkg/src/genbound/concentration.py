"""McDiarmid tail bound, the high-probability radius, and tail simulation.

For classes uniformly bounded by b, the deviation functional concentrates:

    P( UD >= 2 * R_n + eps )  <=  exp(-eps**2 * n / (2 * b**2))

The simulator draws seeded samples, counts exceedances of the fixed threshold
2 * R_n + eps, and compares the frequency against the closed form through a
one-sided Clopper-Pearson interval, so a reported failure requires a
statistically significant exceedance rather than sampling noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.stats import beta

from .complexity import ComplexityResult
from .core import (
    DiscreteDistribution,
    EvaluatedClass,
    InvalidDelta,
    InvalidEnvelope,
    InvariantViolation,
    MissingPopulationMeans,
    PointSampler,
)
from .deviation import uniform_deviation

_TRIAL_CHUNK = 1 << 13


def mcdiarmid_bound(epsilon: float, n: int, b: float) -> float:
    """exp(-eps**2 * n / (2 * b**2)), the bounded-differences tail bound."""
    if b <= 0.0:
        raise InvalidEnvelope(f"envelope must be positive, got {b}")
    if epsilon < 0.0:
        raise InvariantViolation("epsilon must be nonnegative")
    if n < 1:
        raise InvariantViolation("n must be at least 1")
    return math.exp(-(epsilon**2) * n / (2.0 * b**2))


def high_probability_epsilon(delta: float, n: int, b: float) -> float:
    """The radius b * sqrt(2 * ln(1/delta) / n) at confidence 1 - delta.

    Round-trips through mcdiarmid_bound back to delta.
    """
    if not 0.0 < delta < 1.0:
        raise InvalidDelta(f"delta must lie in (0, 1), got {delta}")
    if b <= 0.0:
        raise InvalidEnvelope(f"envelope must be positive, got {b}")
    if n < 1:
        raise InvariantViolation("n must be at least 1")
    return b * math.sqrt(2.0 * math.log(1.0 / delta) / n)


def clopper_pearson_upper(successes: int, trials: int, confidence: float = 0.99) -> float:
    """One-sided upper confidence bound for a binomial proportion."""
    _check_counts(successes, trials, confidence)
    if successes >= trials:
        return 1.0
    return float(beta.ppf(confidence, successes + 1, trials - successes))


def clopper_pearson_lower(successes: int, trials: int, confidence: float = 0.99) -> float:
    """One-sided lower confidence bound for a binomial proportion."""
    _check_counts(successes, trials, confidence)
    if successes <= 0:
        return 0.0
    return float(beta.ppf(1.0 - confidence, successes, trials - successes + 1))


def _check_counts(successes: int, trials: int, confidence: float) -> None:
    if trials < 1 or not 0 <= successes <= trials:
        raise InvariantViolation(f"bad binomial counts: {successes}/{trials}")
    if not 0.0 < confidence < 1.0:
        raise InvalidDelta(f"confidence must lie in (0, 1), got {confidence}")


@dataclass(frozen=True)
class TailExperiment:
    """Parameters and outcome of one seeded tail simulation."""

    n: int
    b: float
    epsilon: float
    trials: int
    seed: int
    exceed_count: int
    empirical_freq: float
    ci_upper: float  # one-sided 99% Clopper-Pearson upper bound
    theoretical: float
    rademacher_value: float
    rademacher: ComplexityResult | None = None

    def __post_init__(self):
        if self.empirical_freq != self.exceed_count / self.trials:
            raise InvariantViolation("empirical_freq must equal exceed_count / trials")
        if self.ci_upper < self.empirical_freq:
            raise InvariantViolation("ci_upper must dominate the empirical frequency")


def simulate_tail(
    class_builder: Callable,
    source: DiscreteDistribution | PointSampler,
    n: int,
    epsilon: float,
    trials: int,
    seed: int,
    rademacher_value: float,
    *,
    rademacher: ComplexityResult | None = None,
    threads: int = 1,
) -> TailExperiment:
    """Count how often UD >= 2 * rademacher_value + epsilon over seeded trials.

    The complexity value is an input, fixed once for the whole experiment; its
    provenance travels in the report.  With a finite data measure the builder
    is evaluated once on the full support and trials are vectorized; with a
    point sampler the builder runs per realized sample and must supply
    population means explicitly.
    """
    if trials < 1000:
        raise InvariantViolation("tail simulation needs at least 1000 trials")
    threshold = 2.0 * rademacher_value + epsilon
    chunks = [(s, min(s + _TRIAL_CHUNK, trials)) for s in range(0, trials, _TRIAL_CHUNK)]
    counts = np.zeros(len(chunks), dtype=np.int64)

    if isinstance(source, DiscreteDistribution):
        base = class_builder(tuple(range(source.size)))
        if base.population_means is None:
            raise MissingPopulationMeans("tail simulation needs population means")
        table = base.evals
        means = base.population_means[:, None]
        envelope = base.envelope_b

        def fill(c: int, start: int, stop: int) -> None:
            idx = source.draw_index_trials(seed, start, stop - start, n)
            empirical = table[:, idx].mean(axis=2)  # (m, chunk)
            ud = np.abs(empirical - means).max(axis=0)
            counts[c] = int(np.count_nonzero(ud >= threshold))

    else:

        def fill(c: int, start: int, stop: int) -> None:
            pts = source.draw(seed, start * n, (stop - start) * n)
            pts = pts.reshape(stop - start, n, -1) if pts.ndim == 2 else pts.reshape(stop - start, n)
            hits = 0
            for j in range(stop - start):
                if uniform_deviation(class_builder(pts[j])) >= threshold:
                    hits += 1
            counts[c] = hits

        envelope = class_builder(source.draw(seed, 0, n)).envelope_b

    if threads <= 1 or len(chunks) == 1:
        for c, (start, stop) in enumerate(chunks):
            fill(c, start, stop)
    else:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(lambda job: fill(*job), [(c, *r) for c, r in enumerate(chunks)]))

    exceed = int(counts.sum())
    return TailExperiment(
        n=n,
        b=envelope,
        epsilon=epsilon,
        trials=trials,
        seed=seed,
        exceed_count=exceed,
        empirical_freq=exceed / trials,
        ci_upper=clopper_pearson_upper(exceed, trials),
        theoretical=mcdiarmid_bound(epsilon, n, envelope),
        rademacher_value=rademacher_value,
        rademacher=rademacher,
    )


@dataclass(frozen=True)
class TailBoundReport:
    passed: bool
    empirical_freq: float
    freq_lower: float  # one-sided lower confidence bound on the frequency
    theoretical: float
    ci_upper: float
    exceed_count: int
    trials: int
    epsilon: float
    n: int
    b: float


def verify_tail_bound(experiment: TailExperiment, confidence: float = 0.99) -> TailBoundReport:
    """Pass unless the simulated frequency exceeds the bound significantly.

    The experiment fails only when the one-sided lower confidence bound of the
    frequency is itself above the closed-form tail probability.
    """
    freq_lower = clopper_pearson_lower(experiment.exceed_count, experiment.trials, confidence)
    passed = (
        experiment.empirical_freq <= experiment.theoretical
        or experiment.theoretical >= freq_lower
    )
    return TailBoundReport(
        passed=passed,
        empirical_freq=experiment.empirical_freq,
        freq_lower=freq_lower,
        theoretical=experiment.theoretical,
        ci_upper=experiment.ci_upper,
        exceed_count=experiment.exceed_count,
        trials=experiment.trials,
        epsilon=experiment.epsilon,
        n=experiment.n,
        b=experiment.b,
    )
