"""Closed-form complexity bounds for norm-constrained linear predictors.

For the class {x -> <w, x>} the empirical complexity obeys

    l2 regime  (||w||_2 <= W, ||x||_2 <= X):      X * W / sqrt(n)
    l1 regime  (||w||_1 <= W, ||x||_inf <= Xinf): (Xinf * W / sqrt(n)) * sqrt(2 ln(2d))

and any finite class obeys the Massart bound on the without-abs quantity,

    (1/n) * max_i ||evals[i]||_2 * sqrt(2 ln m).

Ball samplers generate valid instances; the verifier pits the exact sign
enumeration against each closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .complexity import DEFAULT_SIGN_CAP, empirical_rademacher
from .core import (
    EvaluatedClass,
    InequalityViolation,
    InvalidRadius,
    InvariantViolation,
    derive_seed,
    draw_words,
    words_to_normals,
    words_to_open_uniforms,
    words_to_signs,
    words_to_uniforms,
)

_NORM_TOL = 1e-12


@dataclass(frozen=True)
class L2Ball:
    """Weights in an l2 ball of radius W, inputs in an l2 ball of radius X."""

    weight_radius: float
    input_radius: float


@dataclass(frozen=True)
class L1Linf:
    """Weights in an l1 ball of radius W, inputs in an l-infinity ball of radius Xinf."""

    weight_radius: float
    input_radius: float


NormRegime = L2Ball | L1Linf


@dataclass(frozen=True, eq=False)
class LinearInstance:
    """m weight vectors and n inputs in R^d under one norm regime."""

    weights: np.ndarray  # (m, d)
    inputs: np.ndarray  # (n, d)
    regime: NormRegime

    def __post_init__(self):
        weights = np.atleast_2d(np.array(self.weights, dtype=np.float64))
        inputs = np.atleast_2d(np.array(self.inputs, dtype=np.float64))
        if weights.shape[1] != inputs.shape[1]:
            raise InvariantViolation("weights and inputs must share the dimension d")
        if isinstance(self.regime, L2Ball):
            w_norms = np.sqrt((weights**2).sum(axis=1))
            x_norms = np.sqrt((inputs**2).sum(axis=1))
        else:
            w_norms = np.abs(weights).sum(axis=1)
            x_norms = np.abs(inputs).max(axis=1)
        if w_norms.max() > self.regime.weight_radius + _NORM_TOL:
            raise InvariantViolation(
                f"weight norm {w_norms.max()!r} exceeds radius {self.regime.weight_radius!r}"
            )
        if x_norms.max() > self.regime.input_radius + _NORM_TOL:
            raise InvariantViolation(
                f"input norm {x_norms.max()!r} exceeds radius {self.regime.input_radius!r}"
            )
        weights.setflags(write=False)
        inputs.setflags(write=False)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "inputs", inputs)

    @property
    def d(self) -> int:
        return self.weights.shape[1]

    @property
    def m(self) -> int:
        return self.weights.shape[0]

    @property
    def n(self) -> int:
        return self.inputs.shape[0]

    def evaluated_class(self) -> EvaluatedClass:
        evals = self.weights @ self.inputs.T
        return EvaluatedClass(evals, float(np.abs(evals).max(initial=0.0)))

    def to_payload(self) -> dict:
        return {
            "weights": self.weights.tolist(),
            "inputs": self.inputs.tolist(),
            "regime": type(self.regime).__name__,
            "weight_radius": self.regime.weight_radius,
            "input_radius": self.regime.input_radius,
        }


def l2_bound(X: float, W: float, n: int) -> float:
    """X * W / sqrt(n)."""
    if X < 0.0 or W < 0.0:
        raise InvalidRadius("radii must be nonnegative")
    if n < 1:
        raise InvariantViolation("n must be at least 1")
    return X * W / math.sqrt(n)


def l1_bound(Xinf: float, W: float, n: int, d: int) -> float:
    """(Xinf * W / sqrt(n)) * sqrt(2 * ln(2d))."""
    if Xinf < 0.0 or W < 0.0:
        raise InvalidRadius("radii must be nonnegative")
    if n < 1 or d < 1:
        raise InvariantViolation("n and d must be at least 1")
    return (Xinf * W / math.sqrt(n)) * math.sqrt(2.0 * math.log(2.0 * d))


def massart_bound(cls: EvaluatedClass) -> float:
    """(1/n) * max_i ||evals[i]||_2 * sqrt(2 ln m); 0 for a singleton class."""
    largest = float(np.sqrt((cls.evals**2).sum(axis=1)).max())
    return largest * math.sqrt(2.0 * math.log(cls.m)) / cls.n


def augment_with_negations(cls: EvaluatedClass) -> EvaluatedClass:
    """The class together with its negations; its without-abs complexity equals
    the absolute-value complexity of the original class."""
    evals = np.vstack([cls.evals, -cls.evals])
    means = None
    if cls.population_means is not None:
        means = np.concatenate([cls.population_means, -cls.population_means])
    return EvaluatedClass(evals, cls.envelope_b, means)


def sample_ball(kind: str, radius: float, d: int, count: int, seed: int) -> np.ndarray:
    """Seeded points uniform in an l2, l1, or l-infinity ball of the given radius.

    l2 uses a Gaussian direction scaled by radius * u**(1/d); l1 uses the
    signed exponential (simplex) method with the same radial scaling; linf is
    coordinatewise uniform.  Outputs satisfy the norm constraint to within
    1e-12 and are a pure function of (seed, index range).
    """
    if radius < 0.0:
        raise InvalidRadius("radius must be nonnegative")
    if d < 1:
        raise InvariantViolation("d must be at least 1")
    if kind == "l2":
        words = draw_words(seed, 0, count, d + 1)
        g = words_to_normals(words[:, :d])
        norms = np.sqrt((g * g).sum(axis=1))
        flat = norms <= 0.0
        if np.any(flat):
            g[flat] = 0.0
            g[flat, 0] = 1.0
            norms[flat] = 1.0
        radial = radius * words_to_uniforms(words[:, d]) ** (1.0 / d)
        return g * (radial / norms)[:, None]
    if kind == "l1":
        words = draw_words(seed, 0, count, 2 * d + 1)
        exponentials = -np.log(words_to_open_uniforms(words[:, :d]))
        totals = exponentials.sum(axis=1)
        flat = totals <= 0.0
        if np.any(flat):
            exponentials[flat] = 1.0
            totals[flat] = float(d)
        simplex = exponentials / totals[:, None]
        signs = words_to_signs(words[:, d : 2 * d])
        radial = radius * words_to_uniforms(words[:, 2 * d]) ** (1.0 / d)
        return signs * simplex * radial[:, None]
    if kind == "linf":
        words = draw_words(seed, 0, count, d)
        return radius * (2.0 * words_to_uniforms(words) - 1.0)
    raise InvariantViolation(f"unknown ball kind {kind!r}; expected l2, l1, or linf")


def random_linear_instance(
    seed: int, regime: NormRegime, d: int, n: int, m: int
) -> LinearInstance:
    """A valid instance with weights and inputs sampled in the regime's balls."""
    if isinstance(regime, L2Ball):
        weights = sample_ball("l2", regime.weight_radius, d, m, derive_seed(seed, "weights"))
        inputs = sample_ball("l2", regime.input_radius, d, n, derive_seed(seed, "inputs"))
    else:
        weights = sample_ball("l1", regime.weight_radius, d, m, derive_seed(seed, "weights"))
        inputs = sample_ball("linf", regime.input_radius, d, n, derive_seed(seed, "inputs"))
    return LinearInstance(weights, inputs, regime)


@dataclass(frozen=True)
class LinearBoundReport:
    exact: float
    bound: float
    slack: float
    regime: str
    d: int
    n: int
    m: int


def verify_linear_bound(
    instance: LinearInstance, *, tol: float = 1e-10, sign_cap: int = DEFAULT_SIGN_CAP
) -> LinearBoundReport:
    """Exact complexity of the induced class against the regime's closed form."""
    cls = instance.evaluated_class()
    exact = empirical_rademacher(cls, sign_cap=sign_cap).value
    if isinstance(instance.regime, L2Ball):
        bound = l2_bound(instance.regime.input_radius, instance.regime.weight_radius, instance.n)
        name = "l2"
    else:
        bound = l1_bound(
            instance.regime.input_radius,
            instance.regime.weight_radius,
            instance.n,
            instance.d,
        )
        name = "l1"
    if exact > bound + tol:
        raise InequalityViolation(
            f"exact complexity {exact!r} exceeds the {name} bound {bound!r}",
            payload=instance.to_payload(),
        )
    return LinearBoundReport(exact, bound, bound - exact, name, instance.d, instance.n, instance.m)
