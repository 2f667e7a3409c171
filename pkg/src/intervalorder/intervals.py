"""Interval observations and their componentwise strict order.

An observation is a half-open interval (lower, upper] with lower < upper,
such as a diastolic/systolic blood pressure reading. One interval is below
another only when both endpoints are strictly below; when one interval
strictly contains the other the pair carries no order, and any shared
endpoint is treated as a tie.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

__all__ = [
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
]


class InvalidIntervalError(ValueError):
    """The pair does not satisfy lower < upper with finite bounds."""


class SampleValidationError(ValueError):
    """One or more raw rows cannot form valid intervals.

    ``issues`` lists ``(row, reason)`` pairs with 1-based row numbers.
    """

    def __init__(self, issues: Sequence[tuple[int, str]], message: str | None = None):
        self.issues = list(issues)
        if message is None:
            message = "; ".join(f"{reason} at row {row}" for row, reason in self.issues)
        super().__init__(message)


class OrderRelation(enum.Enum):
    """Relation of a first interval to a second one.

    LESS / GREATER require both endpoint inequalities to be strict and point
    the same way. CONTAINS_OTHER / CONTAINED_IN_OTHER cover strict nesting,
    which carries no order. TIED_ENDPOINT flags any endpoint equality.
    """

    LESS = "less"
    GREATER = "greater"
    CONTAINS_OTHER = "contains-other"
    CONTAINED_IN_OTHER = "contained-in-other"
    TIED_ENDPOINT = "tied-endpoint"


@dataclass(frozen=True)
class Interval:
    """A single (lower, upper] observation with lower < upper, both finite."""

    lower: float
    upper: float

    def __post_init__(self) -> None:
        lo = float(self.lower)
        up = float(self.upper)
        if not (math.isfinite(lo) and math.isfinite(up)):
            raise InvalidIntervalError(f"non-finite bounds ({self.lower}, {self.upper}]")
        if lo == up:
            raise InvalidIntervalError(f"degenerate interval ({lo}, {up}]")
        if lo > up:
            raise InvalidIntervalError(f"reversed bounds ({lo}, {up}]")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", up)


@dataclass(frozen=True)
class CenterRange:
    """Center/half-range view of an interval: C = (L+U)/2, R = (U-L)/2 > 0."""

    center: float
    half_range: float

    def __post_init__(self) -> None:
        c = float(self.center)
        r = float(self.half_range)
        if not (math.isfinite(c) and math.isfinite(r)):
            raise InvalidIntervalError(f"non-finite center/half-range ({self.center}, {self.half_range})")
        if r <= 0.0:
            raise InvalidIntervalError(f"half-range must be positive, got {r}")
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "half_range", r)


def compare(x: Interval, y: Interval) -> OrderRelation:
    """Classify the order relation of ``x`` against ``y``.

    Exactly one variant applies to any pair: strict componentwise order in
    either direction, strict nesting in either direction, or a tied endpoint.
    """
    if x.lower == y.lower or x.upper == y.upper:
        return OrderRelation.TIED_ENDPOINT
    if x.lower < y.lower:
        if x.upper < y.upper:
            return OrderRelation.LESS
        return OrderRelation.CONTAINS_OTHER
    if x.upper > y.upper:
        return OrderRelation.GREATER
    return OrderRelation.CONTAINED_IN_OTHER


def to_center_range(x: Interval) -> CenterRange:
    """Map (L, U] to its center C = (L+U)/2 and half-range R = (U-L)/2."""
    return CenterRange(center=(x.lower + x.upper) / 2.0, half_range=(x.upper - x.lower) / 2.0)


def from_center_range(c: CenterRange) -> Interval:
    """Inverse of :func:`to_center_range`: L = C-R, U = C+R."""
    return Interval(lower=c.center - c.half_range, upper=c.center + c.half_range)


@dataclass(frozen=True, eq=False)
class IntervalSample:
    """An ordered collection of intervals from one population.

    Endpoints are stored as parallel read-only float64 arrays; all testing
    code consumes these arrays directly.
    """

    lower: np.ndarray
    upper: np.ndarray
    label: str = ""

    def __post_init__(self) -> None:
        lo = np.ascontiguousarray(self.lower, dtype=np.float64)
        up = np.ascontiguousarray(self.upper, dtype=np.float64)
        if lo.ndim != 1 or up.ndim != 1 or lo.size != up.size:
            raise SampleValidationError([], "lower/upper must be 1-d arrays of equal length")
        if lo.size == 0:
            raise SampleValidationError([], "empty sample")
        lo.setflags(write=False)
        up.setflags(write=False)
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", up)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[float, float]], label: str = "") -> "IntervalSample":
        """Build a sample from (lower, upper) pairs, rejecting any invalid row."""
        return validate_sample(pairs, label=label)

    @classmethod
    def from_arrays(cls, lower: np.ndarray, upper: np.ndarray, label: str = "") -> "IntervalSample":
        """Build a sample from endpoint arrays, validating every row."""
        sample = cls(lower=np.asarray(lower), upper=np.asarray(upper), label=label)
        issues = _row_issues(sample.lower, sample.upper)
        if issues:
            raise SampleValidationError(issues)
        return sample

    def __len__(self) -> int:
        return int(self.lower.size)

    def __getitem__(self, i: int) -> Interval:
        return Interval(float(self.lower[i]), float(self.upper[i]))

    def __iter__(self) -> Iterator[Interval]:
        for i in range(len(self)):
            yield self[i]

    def centers(self) -> np.ndarray:
        return (self.lower + self.upper) / 2.0

    def half_ranges(self) -> np.ndarray:
        return (self.upper - self.lower) / 2.0


def _row_issues(lower: np.ndarray, upper: np.ndarray) -> list[tuple[int, str]]:
    issues: list[tuple[int, str]] = []
    finite = np.isfinite(lower) & np.isfinite(upper)
    for i in np.flatnonzero(~finite):
        issues.append((int(i) + 1, "non-finite value"))
    with np.errstate(invalid="ignore"):
        degenerate = finite & (lower == upper)
        reversed_ = finite & (lower > upper)
    for i in np.flatnonzero(degenerate):
        issues.append((int(i) + 1, "degenerate interval"))
    for i in np.flatnonzero(reversed_):
        issues.append((int(i) + 1, "reversed bounds"))
    issues.sort(key=lambda item: item[0])
    return issues


def validate_sample(raw: Iterable[tuple[float, float]], label: str = "") -> IntervalSample:
    """Turn raw (lower, upper) rows into a sample, or fail with a row report.

    Strict mode: a single bad row (reversed or degenerate bounds, non-finite
    or unconvertible values) rejects the whole sample, and every offending
    row is listed with its 1-based index.
    """
    lowers: list[float] = []
    uppers: list[float] = []
    issues: list[tuple[int, str]] = []
    count = 0
    for i, row in enumerate(raw, start=1):
        count += 1
        try:
            lo, up = row
            lo = float(lo)
            up = float(up)
        except (TypeError, ValueError):
            issues.append((i, "unparseable row"))
            lowers.append(np.nan)
            uppers.append(np.nan)
            continue
        lowers.append(lo)
        uppers.append(up)
    if count == 0:
        raise SampleValidationError([], "empty sample")
    if not issues:
        issues = _row_issues(np.asarray(lowers), np.asarray(uppers))
    else:
        seen = {row for row, _ in issues}
        issues.extend(
            item for item in _row_issues(np.asarray(lowers), np.asarray(uppers)) if item[0] not in seen
        )
        issues.sort(key=lambda item: item[0])
    if issues:
        raise SampleValidationError(issues)
    return IntervalSample(lower=np.asarray(lowers), upper=np.asarray(uppers), label=label)
