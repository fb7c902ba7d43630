"""Empirical and expected Rademacher complexity, exact and Monte Carlo.

The empirical quantity averages, over all 2**n sign vectors, the largest
(absolute) sign-weighted empirical mean any row attains:

    (1 / 2**n) * sum_sigma  max_i | (1/n) * sum_k sigma_k * evals[i, k] |

The expected quantity integrates it over the n-fold product of a finite data
measure.  A dyadic grid refinement replaces suprema over continuous parameter
boxes by suprema over nested finite grids, with a convergence trace.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from math import sqrt
from typing import Callable

import numpy as np

from .core import (
    DEFAULT_PRODUCT_CAP,
    DEFAULT_SIGN_CAP,
    DiscreteDistribution,
    EvaluatedClass,
    ExactEnumerationLimit,
    InvariantViolation,
    PointSampler,
    Sample,
    deterministic_sum,
    draw_words,
    enumerate_product,
    sign_block,
    words_to_signs,
)

_SIGN_CHUNK = 1 << 14
_MC_CHUNK = 1 << 13


class Method(str, Enum):
    EXACT_ENUMERATION = "exact_enumeration"
    MONTE_CARLO = "monte_carlo"


@dataclass(frozen=True)
class ComplexityResult:
    """A complexity value with its provenance (exact enumeration or sampled)."""

    value: float
    method: Method
    draws: int = 0
    std_error: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.method is Method.EXACT_ENUMERATION and (
            self.draws != 0 or self.std_error != 0.0 or self.seed != 0
        ):
            raise InvariantViolation("exact results carry no draws, std_error, or seed")


def _sign_average(evals: np.ndarray, absolute: bool, sign_cap: int) -> float:
    m, n = evals.shape
    if n > sign_cap:
        raise ExactEnumerationLimit(
            f"exact sign averaging for n={n} exceeds the exact-enumeration cap of {sign_cap}"
        )
    total = 1 << n
    sup = np.empty(total, dtype=np.float64)
    for start in range(0, total, _SIGN_CHUNK):
        stop = min(start + _SIGN_CHUNK, total)
        corr = sign_block(n, start, stop) @ evals.T
        corr /= n
        if absolute:
            np.abs(corr, out=corr)
        sup[start:stop] = corr.max(axis=1)
    return deterministic_sum(sup) / total


def empirical_rademacher(
    cls: EvaluatedClass, *, sign_cap: int = DEFAULT_SIGN_CAP
) -> ComplexityResult:
    """Exact average over all sign vectors of max_i |(1/n) sum_k sigma_k f_i(S_k)|."""
    value = _sign_average(cls.evals, absolute=True, sign_cap=sign_cap)
    return ComplexityResult(value, Method.EXACT_ENUMERATION)


def empirical_rademacher_without_abs(
    cls: EvaluatedClass, *, sign_cap: int = DEFAULT_SIGN_CAP
) -> ComplexityResult:
    """Same average with the absolute value dropped inside the maximum."""
    value = _sign_average(cls.evals, absolute=False, sign_cap=sign_cap)
    return ComplexityResult(value, Method.EXACT_ENUMERATION)


def _run_chunks(fill: Callable[[int, int], None], total: int, threads: int) -> None:
    """Apply fill over fixed-size index chunks; the chunking never depends on
    the worker count, so outputs are identical for any ``threads``."""
    ranges = [(s, min(s + _MC_CHUNK, total)) for s in range(0, total, _MC_CHUNK)]
    if threads <= 1 or len(ranges) == 1:
        for start, stop in ranges:
            fill(start, stop)
        return
    with ThreadPoolExecutor(max_workers=threads) as pool:
        list(pool.map(lambda r: fill(*r), ranges))


def _mc_result(values: np.ndarray, draws: int, seed: int) -> ComplexityResult:
    value = deterministic_sum(values) / draws
    centered = values - value
    variance = deterministic_sum(centered * centered) / (draws - 1)
    return ComplexityResult(value, Method.MONTE_CARLO, draws, sqrt(variance / draws), seed)


def empirical_rademacher_mc(
    cls: EvaluatedClass,
    draws: int,
    seed: int,
    *,
    threads: int = 1,
    absolute: bool = True,
) -> ComplexityResult:
    """Unbiased sample mean over uniform sign draws, with its standard error.

    Draw j's signs come from a fixed RNG word window, and per-draw values are
    reduced by the fixed-order tree sum, so the result is bit-identical for a
    given (seed, draws) at any thread count.
    """
    if draws < 100:
        raise InvariantViolation("Monte Carlo estimation needs at least 100 draws")
    evals = cls.evals
    n = cls.n
    values = np.empty(draws, dtype=np.float64)

    def fill(start: int, stop: int) -> None:
        signs = words_to_signs(draw_words(seed, start, stop - start, n))
        corr = signs @ evals.T
        corr /= n
        if absolute:
            np.abs(corr, out=corr)
        values[start:stop] = corr.max(axis=1)

    _run_chunks(fill, draws, threads)
    return _mc_result(values, draws, seed)


def expected_rademacher(
    class_builder: Callable[[tuple[int, ...]], EvaluatedClass],
    dist: DiscreteDistribution,
    n: int,
    *,
    product_cap: int = DEFAULT_PRODUCT_CAP,
    sign_cap: int = DEFAULT_SIGN_CAP,
) -> ComplexityResult:
    """Exact expectation of the empirical complexity under the product measure.

    ``class_builder`` maps a tuple of support indices to the class restricted
    to that realized sample (one pointwise function family evaluated there).
    """
    total = dist.size**n
    if total > product_cap:
        raise ExactEnumerationLimit(
            f"product enumeration needs {total} tuples, above the cap of {product_cap}"
        )
    values = np.empty(total, dtype=np.float64)
    weights = np.empty(total, dtype=np.float64)
    m = None
    for t, (indices, weight) in enumerate(enumerate_product(dist, n, cap=product_cap)):
        cls = class_builder(indices)
        if m is None:
            m = cls.m
        elif cls.m != m:
            raise InvariantViolation("class_builder must keep the class size m fixed")
        values[t] = _sign_average(cls.evals, absolute=True, sign_cap=sign_cap)
        weights[t] = weight
    return ComplexityResult(deterministic_sum(weights * values), Method.EXACT_ENUMERATION)


def expected_rademacher_mc(
    class_builder: Callable[[np.ndarray], EvaluatedClass],
    sampler: PointSampler,
    n: int,
    draws: int,
    seed: int,
    *,
    threads: int = 1,
    sign_cap: int = DEFAULT_SIGN_CAP,
) -> ComplexityResult:
    """Mean empirical complexity over i.i.d. samples of size n from ``sampler``.

    Here ``class_builder`` receives the realized points (an array of n points)
    rather than support indices.  The inner sign average stays exact.
    """
    if draws < 100:
        raise InvariantViolation("Monte Carlo estimation needs at least 100 draws")
    values = np.empty(draws, dtype=np.float64)

    def fill(start: int, stop: int) -> None:
        pts = sampler.draw(seed, start * n, (stop - start) * n)
        pts = pts.reshape(stop - start, n, -1) if pts.ndim == 2 else pts.reshape(stop - start, n)
        for j in range(stop - start):
            cls = class_builder(pts[j])
            values[start + j] = _sign_average(cls.evals, absolute=True, sign_cap=sign_cap)

    _run_chunks(fill, draws, threads)
    return _mc_result(values, draws, seed)


# ---------------------------------------------------------------------------
# Nested-grid restriction of a continuously parameterized family
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GridFamily:
    """A function family indexed by a box of parameters, evaluated on samples.

    ``evaluator(theta, sample)`` returns the length-n row of values of the
    theta-indexed function on the sample; ``population_mean(theta)``, when
    given, supplies its exact mean under the data measure.  The caller owns the
    envelope bound.
    """

    parameter_box: tuple[tuple[float, float], ...]
    evaluator: Callable[[np.ndarray, Sample], np.ndarray]
    envelope_b: float
    levels: int = 12
    tolerance: float = 1e-6
    population_mean: Callable[[np.ndarray], float] | None = None

    def __post_init__(self):
        box = tuple((float(lo), float(hi)) for lo, hi in self.parameter_box)
        if not box:
            raise InvariantViolation("parameter box needs at least one axis")
        for lo, hi in box:
            if not lo < hi:
                raise InvariantViolation(f"box axis ({lo}, {hi}) must have low < high")
        if self.levels < 1:
            raise InvariantViolation("levels must be at least 1")
        # tolerance 0 is allowed and disables early convergence
        if self.tolerance < 0.0:
            raise InvariantViolation("tolerance must be nonnegative")
        object.__setattr__(self, "parameter_box", box)


@dataclass(frozen=True)
class GridLevel:
    depth: int
    grid_size: int
    value: float


@dataclass(frozen=True, eq=False)
class GridRefinement:
    """Deepest grid class plus the per-depth complexity trace."""

    evaluated_class: EvaluatedClass
    trace: tuple[GridLevel, ...]
    converged: bool

    @property
    def values(self) -> tuple[float, ...]:
        return tuple(level.value for level in self.trace)


def _dyadic_grid(box: tuple[tuple[float, float], ...], depth: int) -> np.ndarray:
    axes = [
        lo + (hi - lo) * np.arange((1 << depth) + 1, dtype=np.float64) / (1 << depth)
        for lo, hi in box
    ]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([axis.ravel() for axis in mesh], axis=-1)


def grid_restricted_class(
    family: GridFamily, sample: Sample, *, sign_cap: int = DEFAULT_SIGN_CAP
) -> GridRefinement:
    """Restrict the family to nested dyadic parameter grids of increasing depth.

    Grids are nested, so the complexity trace is monotone nondecreasing; the
    refinement stops early once successive depths differ by less than the
    family tolerance, else runs to the depth cap with converged=False.
    """
    trace: list[GridLevel] = []
    previous = None
    converged = False
    cls = None
    for depth in range(1, family.levels + 1):
        params = _dyadic_grid(family.parameter_box, depth)
        rows = np.stack([np.asarray(family.evaluator(p, sample), dtype=np.float64) for p in params])
        means = None
        if family.population_mean is not None:
            means = np.array([family.population_mean(p) for p in params], dtype=np.float64)
        cls = EvaluatedClass(rows, family.envelope_b, means)
        value = empirical_rademacher(cls, sign_cap=sign_cap).value
        trace.append(GridLevel(depth, params.shape[0], value))
        if previous is not None and abs(value - previous) < family.tolerance:
            converged = True
            break
        previous = value
    return GridRefinement(cls, tuple(trace), converged)


# ---------------------------------------------------------------------------
# Comparison of the two empirical variants
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WithoutAbsComparison:
    with_abs: float
    without_abs: float
    slack: float


def check_without_abs_le_abs(
    cls: EvaluatedClass, *, tol: float = 1e-12, sign_cap: int = DEFAULT_SIGN_CAP
) -> WithoutAbsComparison:
    """Certify that dropping the absolute value never increases the complexity."""
    with_abs = empirical_rademacher(cls, sign_cap=sign_cap).value
    without = empirical_rademacher_without_abs(cls, sign_cap=sign_cap).value
    if without > with_abs + tol:
        raise InvariantViolation(
            f"without-abs value {without!r} exceeds absolute value {with_abs!r}",
            payload=cls.to_payload(),
        )
    return WithoutAbsComparison(with_abs, without, with_abs - without)
