"""Label-permutation calibration for the two-sample statistics.

Pools both samples, redraws which observations play the role of sample X,
and counts how often the relabelled statistic reaches the observed one.
Comparisons run on exact integer encodings of the statistics, so ties are
handled deterministically and the conservative >= rule is bit-exact.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from . import _engine
from .intervals import IntervalSample

__all__ = [
    "StatisticKind",
    "PermutationPlan",
    "PermutationOutcome",
    "permutation_test",
    "exhaustive_permutation_test",
]

EXHAUSTIVE_LIMIT = 1_000_000


class StatisticKind(enum.Enum):
    U_STATISTIC = "u-statistic"
    KS_D_PLUS = "ks-d-plus"


@dataclass(frozen=True)
class PermutationPlan:
    """How to run a sampled permutation test: B draws from a seeded stream."""

    permutation_count: int = 20000
    seed: int = 0
    statistic_kind: StatisticKind = StatisticKind.U_STATISTIC

    def __post_init__(self) -> None:
        if self.permutation_count < 1:
            raise ValueError(f"permutation count must be >= 1, got {self.permutation_count}")


@dataclass(frozen=True)
class PermutationOutcome:
    """Observed statistic and its permutation p-value.

    Sampled tests report the add-one smoothed p-value
    (1 + exceed_count) / (1 + permutation_count), which can never be 0;
    exhaustive enumeration reports the exact unsmoothed fraction (the
    identity assignment is part of the enumeration, so it is positive too).
    """

    observed: float
    p_value: float
    exceed_count: int
    permutation_count: int


@dataclass(frozen=True)
class _PooledStatistic:
    """Observed integer encoding plus a per-subset evaluator on pooled data."""

    observed_int: int
    denominator: float  # same expression the standalone statistic divides by
    values: object  # Callable[[np.ndarray], np.ndarray]

    @property
    def observed(self) -> float:
        return self.observed_int / self.denominator


def _pooled_statistic(x: IntervalSample, y: IntervalSample, kind: StatisticKind) -> _PooledStatistic:
    m, n = len(x), len(y)
    lower, upper = _engine.pooled_endpoints(x, y)
    if kind is StatisticKind.U_STATISTIC:
        row_sums = _engine.signed_row_sums(lower, upper)
        observed = int(row_sums[:m].sum())
        return _PooledStatistic(
            observed_int=observed,
            denominator=m * n,
            values=lambda subsets: _engine.u_subset_sums(row_sums, subsets),
        )
    grid = _engine.ks_grid(lower, upper, subset_size=m)
    return _PooledStatistic(
        observed_int=_engine.ks_observed_max(grid),
        denominator=math.sqrt(m * n * (m + n)),
        values=lambda subsets: _engine.ks_subset_maxima(grid, subsets),
    )


def permutation_test(
    x: IntervalSample,
    y: IntervalSample,
    plan: PermutationPlan,
    threads: int = 1,
) -> PermutationOutcome:
    """Sampled permutation test of "Y stochastically greater than X".

    Draws ``plan.permutation_count`` uniformly random relabellings from a
    counter-based stream keyed by ``plan.seed`` (replicate b is a pure
    function of the seed and b), recomputes the statistic for each, and
    counts exceedances of the observed value with >=. The returned p-value
    is add-one smoothed and identical for every thread count.
    """
    stat = _pooled_statistic(x, y, plan.statistic_kind)
    chunks = _engine.iter_subset_chunks(plan.seed, plan.permutation_count, len(x) + len(y), len(x))
    exceed = _engine.count_exceedances(chunks, [(stat.values, stat.observed_int)], threads=threads)[0]
    return PermutationOutcome(
        observed=stat.observed,
        p_value=(1 + exceed) / (1 + plan.permutation_count),
        exceed_count=exceed,
        permutation_count=plan.permutation_count,
    )


def exhaustive_permutation_test(
    x: IntervalSample,
    y: IntervalSample,
    statistic_kind: StatisticKind = StatisticKind.U_STATISTIC,
) -> PermutationOutcome:
    """Exact permutation test enumerating every label assignment.

    Serves as the oracle for the sampled test on small problems; refuses
    pools with more than ``EXHAUSTIVE_LIMIT`` assignments.
    """
    m, n = len(x), len(y)
    total = math.comb(m + n, m)
    if total > EXHAUSTIVE_LIMIT:
        raise ValueError(
            f"exhaustive enumeration needs C({m + n}, {m}) = {total} assignments; "
            f"limit is {EXHAUSTIVE_LIMIT}"
        )
    stat = _pooled_statistic(x, y, statistic_kind)
    chunks = _engine.iter_combination_chunks(m + n, m)
    exceed = _engine.count_exceedances(chunks, [(stat.values, stat.observed_int)])[0]
    return PermutationOutcome(
        observed=stat.observed,
        p_value=exceed / total,
        exceed_count=exceed,
        permutation_count=total,
    )
