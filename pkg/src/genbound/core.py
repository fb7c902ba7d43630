"""Core types, exact enumerators, deterministic reduction, and seeded RNG streams.

Everything downstream works on finite models: a function class restricted to a
sample is an m-by-n matrix of values plus an envelope bound, and data
distributions have finite support, so expectations over the sample measure and
its n-fold product are exactly computable.  Monte Carlo paths draw their
randomness from counter-based Philox streams in which draw ``j`` owns a fixed
window of counter blocks.  Results at a fixed seed therefore do not depend on
how work is chunked across threads.
"""

from __future__ import annotations

from dataclasses import InitVar, dataclass
from typing import Callable, Iterator, Sequence

import numpy as np
from numpy.random import Philox
from scipy.special import ndtri

DEFAULT_SIGN_CAP = 20       # exact sign enumeration up to 2**20 vectors
DEFAULT_PRODUCT_CAP = 10**6  # exact product-measure enumeration budget, in tuples

_U64 = np.uint64
_MAX_SEED = (1 << 64) - 1
_ENVELOPE_TOL = 1e-12


class GenboundError(Exception):
    """Base class for library errors."""


class ExactEnumerationLimit(GenboundError):
    """An exact enumeration would exceed its configured cap."""


class InvariantViolation(GenboundError):
    """A structural invariant failed; ``payload`` carries the offending data."""

    def __init__(self, message: str, payload: dict | None = None):
        super().__init__(message)
        self.payload = payload or {}


class InequalityViolation(GenboundError):
    """A certified inequality failed beyond tolerance."""

    def __init__(self, message: str, payload: dict | None = None):
        super().__init__(message)
        self.payload = payload or {}


class MissingPopulationMeans(GenboundError):
    """The operation needs population means but the class carries none."""


class InvalidEnvelope(GenboundError):
    """The envelope bound b must be strictly positive."""


class InvalidDelta(GenboundError):
    """The confidence parameter delta must lie in (0, 1)."""


class DimensionMismatch(GenboundError):
    """Vectors of unequal length or ragged point lists."""


class DegenerateClass(GenboundError):
    """All rows vanish on the sample; the empirical geometry is trivial."""


class InvalidRadius(GenboundError):
    """A radius parameter is outside its admissible range."""


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------


def _as_point_array(points, what: str) -> np.ndarray:
    try:
        arr = np.array(points, dtype=np.float64)
    except ValueError as exc:
        raise DimensionMismatch(f"{what} must share one dimensionality: {exc}") from None
    if arr.ndim not in (1, 2):
        raise DimensionMismatch(f"{what} must be scalars or fixed-length vectors")
    if arr.shape[0] < 1:
        raise InvariantViolation(f"{what} must contain at least one point")
    return arr


@dataclass(frozen=True, eq=False)
class Sample:
    """An ordered sample of n data points with identical dimensionality."""

    points: np.ndarray

    def __post_init__(self):
        pts = _as_point_array(self.points, "sample points")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def point_dim(self) -> int:
        """0 for scalar points, else the vector dimension."""
        return 0 if self.points.ndim == 1 else self.points.shape[1]


@dataclass(frozen=True, eq=False)
class DiscreteDistribution:
    """Finite-support probability measure; expectations over it (and over its
    n-fold product) are exact sums."""

    support: np.ndarray
    probs: np.ndarray

    def __post_init__(self):
        support = _as_point_array(self.support, "support points")
        probs = np.array(self.probs, dtype=np.float64)
        if probs.ndim != 1 or probs.shape[0] != support.shape[0]:
            raise DimensionMismatch("probs must be a vector matching the support length")
        if np.any(probs < 0.0):
            raise InvariantViolation("probabilities must be nonnegative")
        total = float(deterministic_sum(probs))
        if abs(total - 1.0) > 1e-12:
            raise InvariantViolation(f"probabilities sum to {total!r}, not 1 within 1e-12")
        support.setflags(write=False)
        probs.setflags(write=False)
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "probs", probs)
        cumulative = np.cumsum(probs)
        cumulative.setflags(write=False)
        object.__setattr__(self, "_cumulative", cumulative)

    @property
    def size(self) -> int:
        return self.support.shape[0]

    def expectation(self, values) -> float | np.ndarray:
        """Exact expectation of values given on the support (last axis)."""
        vals = np.asarray(values, dtype=np.float64)
        if vals.ndim == 1:
            return deterministic_sum(self.probs * vals)
        return np.array([deterministic_sum(self.probs * row) for row in vals])

    def draw_index_trials(self, seed: int, first_trial: int, count: int, n: int) -> np.ndarray:
        """(count, n) support indices; trial j consumes a fixed word window."""
        words = draw_words(seed, first_trial, count, n)
        u = words_to_uniforms(words)
        idx = np.searchsorted(self._cumulative, u, side="right")
        return np.minimum(idx, self.size - 1).astype(np.intp)

    def sampler(self) -> "PointSampler":
        cumulative = self._cumulative
        support = self.support
        size = self.size

        def build(words: np.ndarray) -> np.ndarray:
            u = words_to_uniforms(words[:, 0])
            idx = np.minimum(np.searchsorted(cumulative, u, side="right"), size - 1)
            return support[idx]

        dim = 0 if support.ndim == 1 else support.shape[1]
        return PointSampler("discrete", dim, 1, build)


@dataclass(frozen=True)
class SignAssignment:
    """One sign vector in {-1,+1}^n, encoded as an n-bit word (bit k set => +1)."""

    bits: int
    n: int

    def __post_init__(self):
        if not 0 <= self.bits < (1 << self.n):
            raise InvariantViolation(f"bit word {self.bits} out of range for n={self.n}")

    def vector(self) -> np.ndarray:
        k = np.arange(self.n)
        return np.where((self.bits >> k) & 1, 1, -1).astype(np.int64)


@dataclass(frozen=True, eq=False)
class EvaluatedClass:
    """A function class restricted to a sample: evals[i, k] = f_i(S_k).

    This matrix plus the envelope bound is the universal representation every
    complexity, deviation, and entropy computation works on.  Population means,
    when present, are exact integrals of each f_i under the data measure.
    """

    evals: np.ndarray
    envelope_b: float
    population_means: np.ndarray | None = None
    validate: InitVar[bool] = True

    def __post_init__(self, validate: bool):
        evals = np.atleast_2d(np.array(self.evals, dtype=np.float64))
        evals.setflags(write=False)
        object.__setattr__(self, "evals", evals)
        object.__setattr__(self, "envelope_b", float(self.envelope_b))
        if self.population_means is not None:
            means = np.array(self.population_means, dtype=np.float64)
            means.setflags(write=False)
            object.__setattr__(self, "population_means", means)
        if validate:
            self._check()

    def _check(self) -> None:
        if self.evals.ndim != 2 or self.evals.shape[0] < 1 or self.evals.shape[1] < 1:
            raise InvariantViolation("evals must be a nonempty m-by-n matrix")
        if not np.all(np.isfinite(self.evals)):
            raise InvariantViolation("evals must be finite")
        if self.envelope_b < 0.0:
            raise InvariantViolation("envelope bound must be nonnegative")
        worst = float(np.abs(self.evals).max())
        if worst > self.envelope_b + _ENVELOPE_TOL:
            raise InvariantViolation(
                f"|evals| reaches {worst!r}, above envelope {self.envelope_b!r}",
                payload=self.to_payload(),
            )
        if self.population_means is not None:
            if self.population_means.shape != (self.m,):
                raise DimensionMismatch("population_means must have one entry per row")
            if float(np.abs(self.population_means).max()) > self.envelope_b + _ENVELOPE_TOL:
                raise InvariantViolation(
                    "population means exceed the envelope", payload=self.to_payload()
                )

    @property
    def m(self) -> int:
        return self.evals.shape[0]

    @property
    def n(self) -> int:
        return self.evals.shape[1]

    def to_payload(self) -> dict:
        payload = {"evals": self.evals.tolist(), "envelope_b": self.envelope_b}
        if self.population_means is not None:
            payload["population_means"] = self.population_means.tolist()
        return payload


# ---------------------------------------------------------------------------
# Exhaustive enumerators
# ---------------------------------------------------------------------------


def enumerate_signs(n: int, *, cap: int = DEFAULT_SIGN_CAP) -> Iterator[SignAssignment]:
    """All 2**n sign assignments in ascending bit-word order."""
    if n < 1:
        raise InvariantViolation("n must be at least 1")
    if n > cap:
        raise ExactEnumerationLimit(
            f"sign enumeration for n={n} exceeds the exact-enumeration cap of {cap}"
        )
    for word in range(1 << n):
        yield SignAssignment(word, n)


def enumerate_product(
    dist: DiscreteDistribution, n: int, *, cap: int = DEFAULT_PRODUCT_CAP
) -> Iterator[tuple[tuple[int, ...], float]]:
    """All support-index tuples of the n-fold product measure with their weights.

    Tuples come in C order (last coordinate fastest), so tuple t encodes the
    base-s digits of t.  Weights are products of coordinate probabilities.
    """
    if n < 1:
        raise InvariantViolation("n must be at least 1")
    s = dist.size
    total = s**n
    if total > cap:
        raise ExactEnumerationLimit(
            f"product enumeration needs {total} tuples, above the cap of {cap}"
        )
    probs = dist.probs
    indices = [0] * n
    while True:
        weight = 1.0
        for k in indices:
            weight *= probs[k]
        yield tuple(indices), float(weight)
        pos = n - 1
        while pos >= 0:
            indices[pos] += 1
            if indices[pos] < s:
                break
            indices[pos] = 0
            pos -= 1
        if pos < 0:
            return


def product_index_grid(size: int, n: int) -> np.ndarray:
    """(size**n, n) array of support indices in the enumerate_product order."""
    t = np.arange(size**n, dtype=np.int64)
    strides = size ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return ((t[:, None] // strides[None, :]) % size).astype(np.intp)


# ---------------------------------------------------------------------------
# Deterministic reduction
# ---------------------------------------------------------------------------


def deterministic_sum(values) -> float:
    """Fixed-order pairwise (tree) summation.

    The tree shape depends only on the element count, so splitting the same
    ordered input into chunks, computing them anywhere, and reducing in index
    order reproduces the identical result bit for bit.  Reordering the input
    may change the result; chunk boundaries never do.
    """
    arr = np.asarray(values, dtype=np.float64).ravel()
    if arr.size == 0:
        return 0.0
    while arr.size > 1:
        if arr.size % 2:
            arr = np.concatenate([arr[:-1:2] + arr[1::2], arr[-1:]])
        else:
            arr = arr[::2] + arr[1::2]
    return float(arr[0])


# ---------------------------------------------------------------------------
# Seeded randomness contract
# ---------------------------------------------------------------------------


def _philox_at(seed: int, block: int) -> Philox:
    if not 0 <= seed <= _MAX_SEED:
        raise InvariantViolation(f"seed must be an unsigned 64-bit integer, got {seed}")
    return Philox(key=seed, counter=[block, 0, 0, 0])


def draw_words(seed: int, first_draw: int, count: int, words_per_draw: int) -> np.ndarray:
    """Raw 64-bit words for draws [first_draw, first_draw + count).

    Every draw owns ceil(words_per_draw / 4) Philox counter blocks, so the
    words backing draw j are a pure function of (seed, j) and any chunking of
    the draw range reproduces them exactly.
    """
    if words_per_draw < 1:
        raise InvariantViolation("words_per_draw must be positive")
    blocks_per_draw = -(-words_per_draw // 4)
    if count <= 0:
        return np.empty((0, words_per_draw), dtype=_U64)
    gen = _philox_at(seed, first_draw * blocks_per_draw)
    raw = gen.random_raw(count * blocks_per_draw * 4)
    return raw.reshape(count, blocks_per_draw * 4)[:, :words_per_draw]


def words_to_uniforms(words: np.ndarray) -> np.ndarray:
    """53-bit uniforms in [0, 1)."""
    return (words >> _U64(11)).astype(np.float64) * 2.0**-53


def words_to_open_uniforms(words: np.ndarray) -> np.ndarray:
    """Uniforms in (0, 1), safe inside inverse CDFs."""
    return ((words >> _U64(11)).astype(np.float64) + 0.5) * 2.0**-53


def words_to_signs(words: np.ndarray) -> np.ndarray:
    """Fair signs in {-1.0, +1.0} from the top bit."""
    return (words >> _U64(63)).astype(np.float64) * 2.0 - 1.0


def words_to_normals(words: np.ndarray) -> np.ndarray:
    return ndtri(words_to_open_uniforms(words))


def sign_block(n: int, start: int, stop: int) -> np.ndarray:
    """Rows [start, stop) of the 2**n-by-n sign matrix, in ascending bit-word order."""
    words = np.arange(start, stop, dtype=_U64)
    bits = (words[:, None] >> np.arange(n, dtype=_U64)[None, :]) & _U64(1)
    return bits.astype(np.float64) * 2.0 - 1.0


def derive_seed(seed: int, label: str) -> int:
    """A stable 64-bit sub-seed for an independent stream."""
    import hashlib

    digest = hashlib.blake2b(f"{seed}:{label}".encode(), digest_size=8).digest()
    return int.from_bytes(digest, "little")


@dataclass(frozen=True, eq=False)
class PointSampler:
    """Seeded point source with a fixed per-point budget of RNG words.

    ``draw(seed, first, count)`` returns points [first, first + count) of the
    stream; the output is a pure function of (seed, index range).
    """

    name: str
    point_dim: int  # 0 for scalar points
    words_per_point: int
    _build: Callable[[np.ndarray], np.ndarray]

    def draw(self, seed: int, first: int, count: int) -> np.ndarray:
        words = draw_words(seed, first, count, self.words_per_point)
        return self._build(words)


def uniform_box_sampler(lows: Sequence[float], highs: Sequence[float]) -> PointSampler:
    lo = np.asarray(lows, dtype=np.float64)
    hi = np.asarray(highs, dtype=np.float64)
    if lo.shape != hi.shape or lo.ndim != 1:
        raise DimensionMismatch("box bounds must be equal-length vectors")
    if np.any(lo > hi):
        raise InvariantViolation("box lower bounds must not exceed upper bounds")

    def build(words: np.ndarray) -> np.ndarray:
        return lo + words_to_uniforms(words) * (hi - lo)

    return PointSampler("uniform_box", lo.size, lo.size, build)


def gaussian_sampler(dim: int, mean: float = 0.0, scale: float = 1.0) -> PointSampler:
    if dim < 1:
        raise InvariantViolation("dim must be at least 1")

    def build(words: np.ndarray) -> np.ndarray:
        return mean + scale * words_to_normals(words)

    return PointSampler("gaussian", dim, dim, build)


def sphere_sampler(dim: int, radius: float = 1.0) -> PointSampler:
    if dim < 1:
        raise InvariantViolation("dim must be at least 1")
    if radius < 0.0:
        raise InvalidRadius("sphere radius must be nonnegative")

    def build(words: np.ndarray) -> np.ndarray:
        g = words_to_normals(words)
        norms = np.sqrt((g * g).sum(axis=1))
        # zero-probability event; pin to a fixed axis to stay deterministic
        flat = norms <= 0.0
        if np.any(flat):
            g[flat] = 0.0
            g[flat, 0] = 1.0
            norms[flat] = 1.0
        return g * (radius / norms)[:, None]

    return PointSampler("sphere", dim, dim, build)
