"""Two-sample stochastic-order tests for interval-valued data.

A pair of observations (lower, upper] is ordered only when both endpoints
are strictly ordered the same way. The package tests whether one sample of
such intervals is stochastically greater than another via a signed
concordance statistic (normal-limit or permutation calibration) and a
one-sided bivariate Kolmogorov-Smirnov alternative, and ships a Monte
Carlo harness for power studies, an HTTP service, and a CLI.
"""

from .intervals import (
    CenterRange,
    Interval,
    IntervalSample,
    InvalidIntervalError,
    OrderRelation,
    SampleValidationError,
    compare,
    from_center_range,
    to_center_range,
    validate_sample,
)
from .kstest import KsOutcome, empirical_cdf, ks_statistic
from .permutation import (
    PermutationOutcome,
    PermutationPlan,
    StatisticKind,
    exhaustive_permutation_test,
    permutation_test,
)
from .simulation import (
    Family,
    GeneratorSpec,
    HalfRangeOverflowError,
    Method,
    PowerReport,
    Scenario,
    mahalanobis_effect,
    power_grid,
    run_scenario,
    sample_bivariate_normal,
    sample_bivariate_t,
    to_intervals,
)
from .utest import (
    DegenerateVarianceError,
    InsufficientDataError,
    ThetaEstimates,
    UTestOutcome,
    asymptotic_test,
    estimate_thetas,
    kernel,
    kernel_sum,
    normal_upper_tail,
    t_statistic,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "Interval",
    "CenterRange",
    "OrderRelation",
    "IntervalSample",
    "InvalidIntervalError",
    "SampleValidationError",
    "compare",
    "to_center_range",
    "from_center_range",
    "validate_sample",
    "kernel",
    "kernel_sum",
    "t_statistic",
    "estimate_thetas",
    "asymptotic_test",
    "normal_upper_tail",
    "ThetaEstimates",
    "UTestOutcome",
    "InsufficientDataError",
    "DegenerateVarianceError",
    "KsOutcome",
    "empirical_cdf",
    "ks_statistic",
    "StatisticKind",
    "PermutationPlan",
    "PermutationOutcome",
    "permutation_test",
    "exhaustive_permutation_test",
    "Family",
    "Method",
    "GeneratorSpec",
    "Scenario",
    "PowerReport",
    "HalfRangeOverflowError",
    "sample_bivariate_normal",
    "sample_bivariate_t",
    "to_intervals",
    "run_scenario",
    "power_grid",
    "mahalanobis_effect",
]
