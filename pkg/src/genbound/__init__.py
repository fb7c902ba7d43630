"""Numerical certification of Rademacher-complexity generalization bounds.

Exact enumeration on finite models where feasible, seeded Monte Carlo with
confidence intervals otherwise.  See the README for the CLI and config schema.
"""

from .complexity import (
    ComplexityResult,
    GridFamily,
    GridRefinement,
    Method,
    check_without_abs_le_abs,
    empirical_rademacher,
    empirical_rademacher_mc,
    empirical_rademacher_without_abs,
    expected_rademacher,
    expected_rademacher_mc,
    grid_restricted_class,
)
from .concentration import (
    TailExperiment,
    clopper_pearson_lower,
    clopper_pearson_upper,
    high_probability_epsilon,
    mcdiarmid_bound,
    simulate_tail,
    verify_tail_bound,
)
from .core import (
    DEFAULT_PRODUCT_CAP,
    DEFAULT_SIGN_CAP,
    DegenerateClass,
    DimensionMismatch,
    DiscreteDistribution,
    EvaluatedClass,
    ExactEnumerationLimit,
    GenboundError,
    InequalityViolation,
    InvalidDelta,
    InvalidEnvelope,
    InvalidRadius,
    InvariantViolation,
    MissingPopulationMeans,
    PointSampler,
    Sample,
    SignAssignment,
    deterministic_sum,
    enumerate_product,
    enumerate_signs,
    gaussian_sampler,
    sphere_sampler,
    uniform_box_sampler,
)
from .deviation import (
    DeviationAudit,
    audit_bounded_difference,
    check_symmetrization_identity,
    uniform_deviation,
    verify_expectation_bound,
)
from .entropy import (
    ChainingTrace,
    CoverMethod,
    CoverResult,
    DudleyResult,
    build_chaining,
    covering_number_exact,
    covering_number_greedy,
    dudley_bound,
    empirical_dist,
    empirical_norm,
    verify_dudley,
)
from .linear import (
    L1Linf,
    L2Ball,
    LinearInstance,
    augment_with_negations,
    l1_bound,
    l2_bound,
    massart_bound,
    sample_ball,
    verify_linear_bound,
)

__version__ = "0.1.0"
