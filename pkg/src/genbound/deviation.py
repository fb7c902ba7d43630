"""Uniform deviation and its exactly checkable properties.

The uniform deviation of a class on a sample is the largest gap between an
empirical mean and the matching population mean:

    max_i | (1/n) * sum_k evals[i, k]  -  population_means[i] |

On finite data models three of its properties can be certified by sheer
enumeration: the sign-symmetrization identity for paired samples, the bound
E[deviation] <= 2 * expected complexity, and the 2b/n bounded-differences
property under single-coordinate replacement.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .complexity import expected_rademacher
from .core import (
    DEFAULT_PRODUCT_CAP,
    DEFAULT_SIGN_CAP,
    DiscreteDistribution,
    EvaluatedClass,
    ExactEnumerationLimit,
    InequalityViolation,
    MissingPopulationMeans,
    deterministic_sum,
    enumerate_product,
    product_index_grid,
    sign_block,
)

Builder = Callable[[tuple[int, ...]], EvaluatedClass]


def uniform_deviation(cls: EvaluatedClass) -> float:
    """max_i |empirical mean of row i - population mean of row i|."""
    if cls.population_means is None:
        raise MissingPopulationMeans(
            "uniform deviation needs population means on the evaluated class"
        )
    gaps = np.abs(cls.evals.mean(axis=1) - cls.population_means)
    return float(gaps.max())


@dataclass(frozen=True)
class DeviationAudit:
    """Outcome of the exhaustive single-coordinate perturbation audit."""

    max_observed_delta: float
    theoretical_cap: float  # 2b/n
    perturbations_checked: int
    violated: bool


def audit_bounded_difference(
    class_builder: Builder,
    dist: DiscreteDistribution,
    n: int,
    *,
    cap: int = DEFAULT_PRODUCT_CAP,
) -> DeviationAudit:
    """Check |UD(S) - UD(S with one coordinate replaced)| <= 2b/n exhaustively.

    Every sample in the n-fold support, every coordinate, and every replacement
    value is visited.  A violation is reported, not raised: it is exactly how
    an understated envelope surfaces.
    """
    s = dist.size
    budget = (s**n) * n * s
    if budget > cap:
        raise ExactEnumerationLimit(
            f"bounded-difference audit needs {budget} perturbations, above the cap of {cap}"
        )
    total = s**n
    deviations = np.empty(total, dtype=np.float64)
    envelope = None
    for t, (indices, _w) in enumerate(enumerate_product(dist, n, cap=cap)):
        cls = class_builder(indices)
        if envelope is None:
            envelope = cls.envelope_b
        deviations[t] = uniform_deviation(cls)
    theoretical_cap = 2.0 * envelope / n

    t_arr = np.arange(total, dtype=np.int64)
    max_delta = 0.0
    checked = 0
    for k in range(n):
        stride = s ** (n - 1 - k)
        digit = (t_arr // stride) % s
        for r in range(s):
            replaced = t_arr + (r - digit) * stride
            delta = float(np.abs(deviations - deviations[replaced]).max())
            max_delta = max(max_delta, delta)
            checked += total
    return DeviationAudit(
        max_observed_delta=max_delta,
        theoretical_cap=theoretical_cap,
        perturbations_checked=checked,
        violated=max_delta > theoretical_cap + 1e-12,
    )


@dataclass(frozen=True)
class SymmetrizationReport:
    lhs: float
    rhs: float
    abs_diff: float


def check_symmetrization_identity(
    class_builder: Builder,
    dist: DiscreteDistribution,
    n: int,
    *,
    tol: float = 1e-10,
    cap: int = DEFAULT_PRODUCT_CAP,
) -> SymmetrizationReport:
    """Exact two-sample symmetrization identity, by full enumeration.

    Over all paired samples (S, S') from the n-fold support and all 2**n sign
    vectors:

        E max_i |sum_k (f_i(S_k) - f_i(S'_k))|
          == E (1/2**n) sum_sigma max_i |sum_k sigma_k (f_i(S_k) - f_i(S'_k))|

    Both sides are computed term by term and must agree within ``tol``.
    """
    s = dist.size
    budget = s ** (2 * n) * (1 << n)
    if budget > cap:
        raise ExactEnumerationLimit(
            f"symmetrization check needs {budget} enumerated terms, above the cap of {cap}"
        )
    rows = []
    weights = []
    for indices, weight in enumerate_product(dist, n, cap=cap):
        rows.append(class_builder(indices).evals)
        weights.append(weight)
    evals = np.stack(rows)  # (T, m, n)
    w = np.asarray(weights)
    total = evals.shape[0]
    signs = sign_block(n, 0, 1 << n)  # (2**n, n)

    lhs_terms = np.empty((total, total), dtype=np.float64)
    rhs_terms = np.empty((total, total), dtype=np.float64)
    for t in range(total):
        diff = evals[t][None, :, :] - evals  # (T, m, n): S fixed, S' varies
        lhs_terms[t] = np.abs(diff.sum(axis=2)).max(axis=1)
        corr = np.tensordot(diff, signs, axes=([2], [1]))  # (T, m, 2**n)
        rhs_terms[t] = np.abs(corr).max(axis=1).mean(axis=1)

    pair_weights = w[:, None] * w[None, :]
    lhs = deterministic_sum((pair_weights * lhs_terms).ravel())
    rhs = deterministic_sum((pair_weights * rhs_terms).ravel())
    gap = abs(lhs - rhs)
    if gap > tol:
        raise InequalityViolation(
            f"symmetrization identity off by {gap!r} (lhs={lhs!r}, rhs={rhs!r})",
            payload={"lhs": lhs, "rhs": rhs},
        )
    return SymmetrizationReport(lhs, rhs, gap)


@dataclass(frozen=True)
class ExpectationBoundReport:
    expected_deviation: float
    twice_rademacher: float
    slack: float


def verify_expectation_bound(
    class_builder: Builder,
    dist: DiscreteDistribution,
    n: int,
    *,
    tol: float = 1e-10,
    product_cap: int = DEFAULT_PRODUCT_CAP,
    sign_cap: int = DEFAULT_SIGN_CAP,
) -> ExpectationBoundReport:
    """Certify E[uniform deviation] <= 2 * expected complexity, both sides exact."""
    deviations = []
    weights = []
    for indices, weight in enumerate_product(dist, n, cap=product_cap):
        deviations.append(uniform_deviation(class_builder(indices)))
        weights.append(weight)
    lhs = deterministic_sum(np.asarray(weights) * np.asarray(deviations))
    rhs = 2.0 * expected_rademacher(
        class_builder, dist, n, product_cap=product_cap, sign_cap=sign_cap
    ).value
    if lhs > rhs + tol:
        raise InequalityViolation(
            f"expected deviation {lhs!r} exceeds twice the complexity {rhs!r}",
            payload={"expected_deviation": lhs, "twice_rademacher": rhs},
        )
    return ExpectationBoundReport(lhs, rhs, rhs - lhs)
