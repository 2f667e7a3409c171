"""Vectorized internals shared by the permutation engine and the simulator.

Everything here works on pooled endpoint arrays and exact integers:

- The pairwise sign kernel is antisymmetric, so the within-subset part of
  any relabelled statistic cancels and each permuted U sum reduces to a
  subset sum over precomputed signed row sums.
- The bivariate KS difference times m*n is an integer on the pooled
  endpoint grid, evaluated by a per-subset histogram sweep.
- Subset draws come from a Philox (counter-based) stream in fixed blocks of
  ``_CHUNK_ROWS`` rows, so replicate b is a pure function of (seed, b) and
  results cannot depend on thread count or chunk scheduling.
"""

from __future__ import annotations

import itertools
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np
from numba import njit

from .intervals import IntervalSample

_CHUNK_ROWS = 1024
_INT64_MIN = np.iinfo(np.int64).min


def philox_generator(seed) -> np.random.Generator:
    """Philox-backed generator from an integer seed or a SeedSequence."""
    if isinstance(seed, np.random.SeedSequence):
        ss = seed
    else:
        ss = np.random.SeedSequence(int(seed))
    return np.random.Generator(np.random.Philox(ss))


def pooled_endpoints(x: IntervalSample, y: IntervalSample) -> tuple[np.ndarray, np.ndarray]:
    return np.concatenate([x.lower, y.lower]), np.concatenate([x.upper, y.upper])


def signed_row_sums(lower: np.ndarray, upper: np.ndarray) -> np.ndarray:
    """For each pooled observation, (# strictly above it) - (# strictly below it).

    Summing these over a subset S gives the exact integer kernel sum of S
    against its complement, because the within-subset terms cancel.
    """
    below = (lower[:, None] < lower[None, :]) & (upper[:, None] < upper[None, :])
    return below.sum(axis=1, dtype=np.int64) - below.sum(axis=0, dtype=np.int64)


def u_subset_sums(row_sums: np.ndarray, subsets: np.ndarray) -> np.ndarray:
    return row_sums[subsets].sum(axis=1)


@dataclass(frozen=True)
class KsGrid:
    """Precomputed pooled-grid structure for repeated KS evaluations."""

    s_grid: np.ndarray
    t_grid: np.ndarray
    lower_rank: np.ndarray
    upper_rank: np.ndarray
    base: np.ndarray  # subset_size * cumulative pooled counts, int64
    first_valid: np.ndarray  # per s row, first t column with s < t
    total: int
    subset_size: int


def ks_grid(lower: np.ndarray, upper: np.ndarray, subset_size: int) -> KsGrid:
    s_grid = np.unique(lower)
    t_grid = np.unique(upper)
    lower_rank = np.searchsorted(s_grid, lower).astype(np.int64)
    upper_rank = np.searchsorted(t_grid, upper).astype(np.int64)
    counts = np.zeros((s_grid.size, t_grid.size), dtype=np.int64)
    np.add.at(counts, (lower_rank, upper_rank), 1)
    np.cumsum(counts, axis=0, out=counts)
    np.cumsum(counts, axis=1, out=counts)
    first_valid = np.searchsorted(t_grid, s_grid, side="right")
    return KsGrid(
        s_grid=s_grid,
        t_grid=t_grid,
        lower_rank=lower_rank,
        upper_rank=upper_rank,
        base=subset_size * counts,
        first_valid=first_valid,
        total=int(lower.size),
        subset_size=int(subset_size),
    )


@njit(cache=True, nogil=True)
def _ks_subset_maxima(lower_rank, upper_rank, base, first_valid, subsets, total):
    rows, m = subsets.shape
    gl, gu = base.shape
    out = np.empty(rows, dtype=np.int64)
    hist = np.zeros((gl, gu), dtype=np.int64)
    colcum = np.zeros(gu, dtype=np.int64)
    for r in range(rows):
        for k in range(m):
            p = subsets[r, k]
            hist[lower_rank[p], upper_rank[p]] += 1
        best = _INT64_MIN
        for b in range(gu):
            colcum[b] = 0
        for a in range(gl):
            rowacc = 0
            fv = first_valid[a]
            for b in range(gu):
                rowacc += hist[a, b]
                colcum[b] += rowacc
                if b >= fv:
                    v = total * colcum[b] - base[a, b]
                    if v > best:
                        best = v
        out[r] = best
        for k in range(m):
            p = subsets[r, k]
            hist[lower_rank[p], upper_rank[p]] = 0
    return out


def ks_subset_maxima(grid: KsGrid, subsets: np.ndarray) -> np.ndarray:
    """Integer-scaled KS maxima (m*n times F-G, restricted to s < t) per subset."""
    return _ks_subset_maxima(
        grid.lower_rank,
        grid.upper_rank,
        grid.base,
        grid.first_valid,
        np.ascontiguousarray(subsets, dtype=np.int32),
        grid.total,
    )


def ks_observed_max(grid: KsGrid) -> int:
    """Integer KS maximum for the identity assignment (first subset_size pooled)."""
    identity = np.arange(grid.subset_size, dtype=np.int32)[None, :]
    return int(ks_subset_maxima(grid, identity)[0])


def iter_subset_chunks(seed, count: int, pool_size: int, subset_size: int) -> Iterator[np.ndarray]:
    """Uniform random subsets of the pool, in fixed blocks of ``_CHUNK_ROWS``.

    Row b holds the indices of the ``subset_size`` smallest of ``pool_size``
    uniforms drawn for replicate b; the block layout is part of the stream
    contract and never changes with threading.
    """
    rng = philox_generator(seed)
    for start in range(0, count, _CHUNK_ROWS):
        rows = min(_CHUNK_ROWS, count - start)
        u = rng.random((rows, pool_size))
        subs = np.argpartition(u, subset_size, axis=1)[:, :subset_size]
        yield np.ascontiguousarray(subs, dtype=np.int32)


def iter_combination_chunks(pool_size: int, subset_size: int, chunk: int = 4096) -> Iterator[np.ndarray]:
    """All size-``subset_size`` subsets of the pool, in array chunks."""
    it = itertools.combinations(range(pool_size), subset_size)
    while True:
        block = list(itertools.islice(it, chunk))
        if not block:
            return
        yield np.asarray(block, dtype=np.int32)


def count_exceedances(
    chunks: Iterable[np.ndarray],
    evaluators: Sequence[tuple[Callable[[np.ndarray], np.ndarray], int]],
    threads: int = 1,
) -> list[int]:
    """Count, per evaluator, how many subset statistics reach the observed value.

    Each evaluator is a (values_fn, observed_int) pair compared with >= in
    exact integer arithmetic. Chunks are evaluated independently and the
    counts summed, so the result is identical for any thread count.
    """

    def handle(subsets: np.ndarray) -> list[int]:
        return [int(np.count_nonzero(fn(subsets) >= obs)) for fn, obs in evaluators]

    totals = [0] * len(evaluators)
    if threads <= 1:
        for subsets in chunks:
            for i, c in enumerate(handle(subsets)):
                totals[i] += c
        return totals
    with ThreadPoolExecutor(max_workers=threads) as pool:
        pending = deque()
        for subsets in chunks:
            pending.append(pool.submit(handle, subsets))
            if len(pending) >= 2 * threads:
                for i, c in enumerate(pending.popleft().result()):
                    totals[i] += c
        while pending:
            for i, c in enumerate(pending.popleft().result()):
                totals[i] += c
    return totals
