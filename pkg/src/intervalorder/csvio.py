"""CSV contract for interval samples.

A sample file has a required ``lower,upper`` header (case-insensitive),
exactly two numeric columns with dot decimal separators, and optional
comment lines starting with ``#``. Row numbers in error messages are
1-based over data rows, matching sample validation.
"""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .intervals import _row_issues

__all__ = ["CsvFormatError", "read_interval_pairs", "write_interval_pairs"]

_HEADER = ("lower", "upper")


class CsvFormatError(ValueError):
    """The file violates the two-column interval CSV contract."""

    def __init__(self, message: str, issues: Sequence[tuple[int, str]] = ()):
        super().__init__(message)
        self.issues = list(issues)


def read_interval_pairs(path: str | Path) -> list[tuple[float, float]]:
    """Parse a sample file into (lower, upper) float pairs.

    Raises :class:`CsvFormatError` for a missing/incorrect header, wrong
    column counts, unparseable values, or rows that cannot form intervals
    (reversed/degenerate bounds, non-finite values). All offending rows are
    reported with 1-based data-row numbers, exactly the rows and indices
    sample validation would reject. I/O failures propagate as ``OSError``.
    """
    with open(path, "r", encoding="utf-8", newline="") as handle:
        content = (line for line in handle if line.strip() and not line.lstrip().startswith("#"))
        reader = csv.reader(content)
        try:
            header = next(reader)
        except StopIteration:
            raise CsvFormatError(f"{path}: empty file, expected 'lower,upper' header") from None
        if tuple(col.strip().lower() for col in header) != _HEADER:
            raise CsvFormatError(f"{path}: expected header 'lower,upper', got {','.join(header)!r}")
        pairs: list[tuple[float, float]] = []
        issues: list[tuple[int, str]] = []
        for row_no, row in enumerate(reader, start=1):
            if len(row) != 2:
                issues.append((row_no, f"expected 2 columns, got {len(row)}"))
                pairs.append((np.nan, np.nan))
                continue
            try:
                pairs.append((float(row[0]), float(row[1])))
            except ValueError:
                issues.append((row_no, "unparseable value"))
                pairs.append((np.nan, np.nan))
    if not pairs:
        raise CsvFormatError(f"{path}: no data rows")
    flagged = {row for row, _ in issues}
    lower = np.asarray([p[0] for p in pairs])
    upper = np.asarray([p[1] for p in pairs])
    issues.extend(item for item in _row_issues(lower, upper) if item[0] not in flagged)
    if issues:
        issues.sort(key=lambda item: item[0])
        summary = "; ".join(f"{reason} at row {row}" for row, reason in issues)
        raise CsvFormatError(f"{path}: {summary}", issues)
    return pairs


def write_interval_pairs(path: str | Path, pairs: Iterable[tuple[float, float]]) -> None:
    """Write pairs using the same contract (mainly for tests and tooling)."""
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(_HEADER)
        for lower, upper in pairs:
            writer.writerow([repr(float(lower)), repr(float(upper))])
