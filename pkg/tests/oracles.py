"""Independent brute-force references the test suite checks the package against.

Everything here is deliberately naive: scalar loops over interval objects,
full enumerations, and dense-mesh scans. None of it shares code with the
vectorized production paths it validates.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from intervalorder import IntervalSample, OrderRelation, compare


def _lt(a, b) -> bool:
    return compare(a, b) is OrderRelation.LESS


def brute_t_statistic(x: IntervalSample, y: IntervalSample) -> float:
    """Double loop over the scalar pair kernel."""
    total = 0
    for xi in x:
        for yj in y:
            if _lt(xi, yj):
                total += 1
            elif _lt(yj, xi):
                total -= 1
    return total / (len(x) * len(y))


def direct_triple_frequencies(sample: IntervalSample) -> tuple[float, float, float]:
    """O(m^3) enumeration of the three ordered-triple event frequencies."""
    items = list(sample)
    m = len(items)
    c1 = c2 = c3 = 0
    for i, j, k in itertools.permutations(range(m), 3):
        if _lt(items[i], items[j]) and _lt(items[i], items[k]):
            c1 += 1
        if _lt(items[j], items[i]) and _lt(items[k], items[i]):
            c2 += 1
        if _lt(items[k], items[i]) and _lt(items[i], items[j]):
            c3 += 1
    denom = m * (m - 1) * (m - 2)
    return c1 / denom, c2 / denom, c3 / denom


def mw_below_count(x_values: np.ndarray, y_values: np.ndarray) -> int:
    """Number of (i, j) pairs with x_i < y_j, counted directly."""
    return int(sum(1 for a in x_values for b in y_values if a < b))


def dense_mesh_d_plus(x: IntervalSample, y: IntervalSample, mesh_points: int = 1000) -> float:
    """KS maximum from a dense brute-force mesh.

    The mesh is ``mesh_points`` equispaced values per axis spanning the data
    range, plus every pooled endpoint so that no step rectangle can be
    missed; the difference is evaluated by direct counting at each (s, t)
    with s < t.
    """
    m, n = len(x), len(y)
    lowers = np.concatenate([x.lower, y.lower])
    uppers = np.concatenate([x.upper, y.upper])
    lo = min(lowers.min(), uppers.min())
    hi = max(lowers.max(), uppers.max())
    axis = np.union1d(np.linspace(lo, hi, mesh_points), np.concatenate([lowers, uppers]))
    s_mask = (x.lower[None, :] <= axis[:, None], y.lower[None, :] <= axis[:, None])
    t_mask = (x.upper[None, :] <= axis[:, None], y.upper[None, :] <= axis[:, None])
    counts_x = s_mask[0].astype(np.int64) @ t_mask[0].astype(np.int64).T
    counts_y = s_mask[1].astype(np.int64) @ t_mask[1].astype(np.int64).T
    diff = n * counts_x - m * counts_y
    valid = axis[:, None] < axis[None, :]
    best = int(diff[valid].max())
    return best / math.sqrt(m * n * (m + n))


def all_assignment_kernel_sums(x: IntervalSample, y: IntervalSample) -> list[int]:
    """Integer kernel sums for every label assignment of the pooled sample.

    Rebuilds each relabelled pair of samples and scores it with the scalar
    kernel, independently of the pooled row-sum machinery.
    """
    pooled = list(x) + list(y)
    m = len(x)
    mn = len(x) * len(y)
    sums = []
    for subset in itertools.combinations(range(len(pooled)), m):
        chosen = set(subset)
        xs = IntervalSample.from_pairs([(pooled[i].lower, pooled[i].upper) for i in sorted(chosen)])
        ys = IntervalSample.from_pairs(
            [(pooled[i].lower, pooled[i].upper) for i in range(len(pooled)) if i not in chosen]
        )
        sums.append(round(brute_t_statistic(xs, ys) * mn))
    return sums


def random_sample(rng: np.random.Generator, size: int, *, integer_grid: bool = False) -> IntervalSample:
    """A random valid sample; integer_grid forces frequent endpoint ties."""
    if integer_grid:
        lower = rng.integers(0, 8, size).astype(float)
        upper = lower + rng.integers(1, 6, size).astype(float)
    else:
        lower = rng.normal(0.0, 1.0, size)
        upper = lower + rng.gamma(2.0, 0.5, size) + 1e-9
    return IntervalSample.from_arrays(lower, upper)


def constant_width_sample(rng: np.random.Generator, size: int, width: float = 1.0) -> IntervalSample:
    centers = rng.normal(0.0, 1.0, size)
    return IntervalSample.from_arrays(centers - width / 2.0, centers + width / 2.0)
