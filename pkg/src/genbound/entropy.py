"""Empirical pseudometric, covering numbers, chaining, and the entropy integral.

Rows of an evaluated class live in the sample-dependent pseudometric

    dist(f, g) = sqrt((1/n) * sum_k (f(S_k) - g(S_k))**2),

under which N(eps) is the least number of CLOSED balls of radius eps, centered
at rows of the class itself, that cover it.  The entropy integral bound reads

    without-abs complexity  <=  4*eps + (12 / sqrt(n)) * integral_eps^{c/2} sqrt(ln N(u)) du

with c the largest empirical row norm.  N is a nonincreasing step function of
the radius, constant between breakpoints, so both the default left-endpoint
upper Riemann sum and the optional exact breakpoint integration evaluate it
without approximating the covering numbers themselves.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .complexity import empirical_rademacher_without_abs
from .core import (
    DEFAULT_SIGN_CAP,
    DegenerateClass,
    DimensionMismatch,
    EvaluatedClass,
    ExactEnumerationLimit,
    InequalityViolation,
    InvalidRadius,
    InvariantViolation,
    deterministic_sum,
)

DEFAULT_COVER_CAP = 16  # exact minimal covers up to this many distinct rows


class CoverMethod(str, Enum):
    EXACT_MINIMAL = "exact"
    GREEDY = "greedy"


def empirical_norm(row) -> float:
    """sqrt((1/n) * sum_k row[k]**2)."""
    arr = np.asarray(row, dtype=np.float64)
    if arr.ndim != 1 or arr.size < 1:
        raise DimensionMismatch("empirical norm expects a nonempty vector")
    return float(np.sqrt(np.mean(arr * arr)))


def empirical_dist(row_a, row_b) -> float:
    """Empirical norm of the difference; a pseudometric on rows."""
    a = np.asarray(row_a, dtype=np.float64)
    b = np.asarray(row_b, dtype=np.float64)
    if a.shape != b.shape:
        raise DimensionMismatch(f"rows of length {a.shape} vs {b.shape}")
    return empirical_norm(a - b)


def _distance_matrix(evals: np.ndarray) -> np.ndarray:
    diff = evals[:, None, :] - evals[None, :, :]
    return np.sqrt(np.mean(diff * diff, axis=2))


def _dedup(dm: np.ndarray) -> np.ndarray:
    """Representatives (lowest index first) of the distance-zero classes."""
    reps: list[int] = []
    for i in range(dm.shape[0]):
        if not any(dm[i, r] == 0.0 for r in reps):
            reps.append(i)
    return np.asarray(reps, dtype=np.intp)


@dataclass(frozen=True)
class CoverResult:
    """An internal cover: centers are row indices of the class itself."""

    radius: float
    size: int
    center_indices: tuple[int, ...]
    method: CoverMethod


def _exact_cover_positions(sub: np.ndarray, epsilon: float) -> tuple[int, ...]:
    """Lexicographically smallest minimum-size cover over deduplicated rows."""
    r = sub.shape[0]
    within = sub <= epsilon
    masks = [int(sum(1 << j for j in np.flatnonzero(within[c]))) for c in range(r)]
    full = (1 << r) - 1
    for size in range(1, r + 1):
        for combo in itertools.combinations(range(r), size):
            covered = 0
            for c in combo:
                covered |= masks[c]
            if covered == full:
                return combo
    raise AssertionError("a set always covers itself")  # pragma: no cover


def covering_number_exact(
    cls: EvaluatedClass, epsilon: float, *, cap: int = DEFAULT_COVER_CAP
) -> CoverResult:
    """Minimal internal cover by closed balls, found by subset enumeration.

    Duplicate rows (distance zero) are collapsed first; among all minimum-size
    covers the lexicographically smallest center set wins.
    """
    if epsilon <= 0.0:
        raise InvalidRadius("cover radius must be positive")
    dm = _distance_matrix(cls.evals)
    reps = _dedup(dm)
    if reps.size > cap:
        raise ExactEnumerationLimit(
            f"{reps.size} distinct rows exceed the exact-cover cap of {cap}; use the greedy cover"
        )
    sub = dm[np.ix_(reps, reps)]
    combo = _exact_cover_positions(sub, epsilon)
    centers = tuple(int(reps[c]) for c in combo)
    return CoverResult(float(epsilon), len(centers), centers, CoverMethod.EXACT_MINIMAL)


def _greedy_sequence(sub: np.ndarray) -> tuple[list[int], np.ndarray]:
    """Farthest-point-first center order over deduplicated rows.

    Returns the center positions and the max-min coverage radius after each
    prefix; the chosen prefix for radius eps is the shortest one whose
    coverage radius is <= eps.  The order does not depend on the radius.
    """
    order = [0]
    nearest = sub[0].copy()
    radii = []
    while True:
        farthest = int(np.argmax(nearest))
        radius = float(nearest[farthest])
        radii.append(radius)
        if radius <= 0.0:
            break
        order.append(farthest)
        np.minimum(nearest, sub[farthest], out=nearest)
    return order, np.asarray(radii)


def covering_number_greedy(cls: EvaluatedClass, epsilon: float) -> CoverResult:
    """Farthest-point-first cover; always valid, size at least the minimum."""
    if epsilon <= 0.0:
        raise InvalidRadius("cover radius must be positive")
    dm = _distance_matrix(cls.evals)
    reps = _dedup(dm)
    sub = dm[np.ix_(reps, reps)]
    order, radii = _greedy_sequence(sub)
    size = int(np.argmax(radii <= epsilon)) + 1
    centers = tuple(int(reps[p]) for p in order[:size])
    return CoverResult(float(epsilon), size, centers, CoverMethod.GREEDY)


@dataclass(frozen=True, eq=False)
class _CoverProfile:
    """N(u) as a step function: sizes[j] holds on [thresholds[j], thresholds[j+1])."""

    thresholds: np.ndarray  # ascending, starting at 0
    sizes: np.ndarray

    def size_at(self, radii) -> np.ndarray:
        idx = np.searchsorted(self.thresholds, np.asarray(radii, dtype=np.float64), side="right")
        return self.sizes[np.maximum(idx - 1, 0)]


def _cover_profile(cls: EvaluatedClass, method: CoverMethod, cap: int) -> _CoverProfile:
    dm = _distance_matrix(cls.evals)
    reps = _dedup(dm)
    sub = dm[np.ix_(reps, reps)]
    if method is CoverMethod.EXACT_MINIMAL:
        if reps.size > cap:
            raise ExactEnumerationLimit(
                f"{reps.size} distinct rows exceed the exact-cover cap of {cap}; use the greedy cover"
            )
        thresholds = np.unique(sub)
        sizes = np.empty(thresholds.size, dtype=np.int64)
        for j, value in enumerate(thresholds):
            sizes[j] = reps.size if value <= 0.0 else len(_exact_cover_positions(sub, value))
        return _CoverProfile(thresholds, sizes)
    _order, radii = _greedy_sequence(sub)
    # size at u is 1 + the number of prefix coverage radii still above u
    thresholds = np.unique(np.concatenate([[0.0], radii]))
    sizes = np.array(
        [1 + int(np.count_nonzero(radii > value)) for value in thresholds], dtype=np.int64
    )
    return _CoverProfile(thresholds, sizes)


# ---------------------------------------------------------------------------
# Chaining
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ChainLevel:
    depth: int
    epsilon: float  # c / 2**depth
    cover: CoverResult
    assignment: tuple[int, ...]  # per row, the nearest center's row index


@dataclass(frozen=True, eq=False)
class ChainingTrace:
    """Dyadic multiscale covers with nearest-center assignments per level."""

    c: float
    levels: tuple[ChainLevel, ...]
    target_epsilon: float


def _norms(cls: EvaluatedClass) -> np.ndarray:
    return np.sqrt(np.mean(cls.evals * cls.evals, axis=1))


def build_chaining(
    cls: EvaluatedClass,
    target_epsilon: float,
    *,
    method: CoverMethod | str | None = None,
    cover_cap: int = DEFAULT_COVER_CAP,
) -> ChainingTrace:
    """Covers at radii c/2, c/4, ... down to the first level <= target_epsilon.

    The cover is exact when the distinct-row count fits the cap (or when
    explicitly requested), greedy otherwise.  Each row's assigned center at a
    level is within that level's radius, so the deepest assignment is a
    target-accuracy approximation of the whole class.
    """
    c = float(_norms(cls).max())
    if c <= 0.0:
        raise DegenerateClass("all rows vanish on the sample")
    if not 0.0 < target_epsilon < c / 2.0:
        raise InvalidRadius(f"target epsilon must lie in (0, {c / 2.0}), got {target_epsilon}")
    dm = _distance_matrix(cls.evals)
    reps = _dedup(dm)
    if method is None:
        method = CoverMethod.EXACT_MINIMAL if reps.size <= cover_cap else CoverMethod.GREEDY
    else:
        method = _as_method(method)
    levels = []
    depth = 0
    while True:
        depth += 1
        eps_j = c / (1 << depth)
        if method is CoverMethod.EXACT_MINIMAL:
            cover = covering_number_exact(cls, eps_j, cap=cover_cap)
        else:
            cover = covering_number_greedy(cls, eps_j)
        centers = np.asarray(sorted(cover.center_indices), dtype=np.intp)
        nearest = centers[np.argmin(dm[:, centers], axis=1)]
        levels.append(ChainLevel(depth, eps_j, cover, tuple(int(i) for i in nearest)))
        if eps_j <= target_epsilon:
            break
    return ChainingTrace(c, tuple(levels), float(target_epsilon))


# ---------------------------------------------------------------------------
# Entropy integral
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class DudleyResult:
    bound: float
    epsilon: float
    c: float
    integral: float
    radii: np.ndarray  # left endpoints of the integration cells
    cover_sizes: np.ndarray
    cover_method: CoverMethod
    grid_points: int | None  # None means exact breakpoint integration


def _as_method(method: CoverMethod | str) -> CoverMethod:
    return CoverMethod(method)


def _bound_from_profile(
    profile: _CoverProfile,
    c: float,
    n_sample: int,
    epsilon: float,
    method: CoverMethod,
    grid_points: int | None,
) -> DudleyResult:
    if not 0.0 < epsilon < c / 2.0:
        raise InvalidRadius(f"epsilon must lie in (0, {c / 2.0}), got {epsilon}")
    if grid_points is None:
        inner = [float(v) for v in profile.thresholds if epsilon < v < c / 2.0]
        knots = np.asarray([epsilon, *inner, c / 2.0])
        radii = knots[:-1]
        sizes = profile.size_at(radii)
        integral = deterministic_sum(np.sqrt(np.log(sizes)) * np.diff(knots))
    else:
        if grid_points < 1:
            raise InvariantViolation("grid_points must be at least 1")
        width = (c / 2.0 - epsilon) / grid_points
        radii = epsilon + width * np.arange(grid_points, dtype=np.float64)
        sizes = profile.size_at(radii)
        integral = deterministic_sum(np.sqrt(np.log(sizes))) * width
    bound = 4.0 * epsilon + (12.0 / math.sqrt(n_sample)) * integral
    return DudleyResult(
        bound=bound,
        epsilon=float(epsilon),
        c=c,
        integral=integral,
        radii=radii,
        cover_sizes=sizes,
        cover_method=method,
        grid_points=grid_points,
    )


def dudley_bound(
    cls: EvaluatedClass,
    epsilon: float,
    cover_method: CoverMethod | str = CoverMethod.EXACT_MINIMAL,
    *,
    grid_points: int | None = 256,
    cover_cap: int = DEFAULT_COVER_CAP,
) -> DudleyResult:
    """4*eps + (12/sqrt(n)) * integral of sqrt(ln N(u)) over [eps, c/2].

    The default scheme is a left-endpoint upper Riemann sum, an upper bound of
    the integral because the integrand is nonincreasing; ``grid_points=None``
    integrates the step function exactly at its breakpoints.  Greedy covers
    only enlarge N, so either way the returned value stays a valid bound.
    """
    method = _as_method(cover_method)
    c = float(_norms(cls).max())
    if c <= 0.0:
        raise DegenerateClass("all rows vanish on the sample")
    profile = _cover_profile(cls, method, cover_cap)
    return _bound_from_profile(profile, c, cls.n, float(epsilon), method, grid_points)


@dataclass(frozen=True)
class DudleyEntry:
    epsilon: float
    bound: float
    slack: float


@dataclass(frozen=True, eq=False)
class DudleyReport:
    without_abs: float
    entries: tuple[DudleyEntry, ...]
    best_epsilon: float
    cover_method: CoverMethod


def verify_dudley(
    cls: EvaluatedClass,
    epsilon_grid,
    *,
    cover_method: CoverMethod | str = CoverMethod.EXACT_MINIMAL,
    tol: float = 1e-10,
    grid_points: int | None = 256,
    sign_cap: int = DEFAULT_SIGN_CAP,
    cover_cap: int = DEFAULT_COVER_CAP,
) -> DudleyReport:
    """Certify the entropy integral bound at every admissible radius in the grid.

    The covering-number step function is computed once and shared by the whole
    radius grid; its values are exactly those a direct cover evaluation gives.
    """
    method = _as_method(cover_method)
    lhs = empirical_rademacher_without_abs(cls, sign_cap=sign_cap).value
    c = float(_norms(cls).max())
    if c <= 0.0:
        raise DegenerateClass("all rows vanish on the sample")
    profile = _cover_profile(cls, method, cover_cap)
    entries = []
    for eps in epsilon_grid:
        result = _bound_from_profile(profile, c, cls.n, float(eps), method, grid_points)
        if lhs > result.bound + tol:
            raise InequalityViolation(
                f"without-abs complexity {lhs!r} exceeds the entropy bound "
                f"{result.bound!r} at radius {eps!r}",
                payload={"epsilon": float(eps), **cls.to_payload()},
            )
        entries.append(DudleyEntry(float(eps), result.bound, result.bound - lhs))
    if not entries:
        raise InvalidRadius("epsilon grid is empty")
    best = min(entries, key=lambda e: e.bound)
    return DudleyReport(lhs, tuple(entries), best.epsilon, method)
