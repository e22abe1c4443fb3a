"""Empirical h-index functionals on citation samples."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

__all__ = [
    "CitationSample",
    "EmpiricalSurvival",
    "empirical_h",
    "empirical_h_integer",
    "empirical_survival",
]


@dataclass(frozen=True)
class CitationSample:
    """Citation counts of one scholar, one entry per paper.

    Counts are stored as a read-only float array; a descending-sorted copy
    is kept alongside for the order-statistic formulas.
    """

    counts: np.ndarray
    descending: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        counts = np.array(self.counts, dtype=float).ravel()
        if counts.size == 0:
            raise DomainError("empty sample")
        if not np.all(np.isfinite(counts)):
            raise DomainError("citation counts must be finite")
        if np.any(counts < 0):
            raise DomainError("citation counts must be nonnegative")
        counts.setflags(write=False)
        desc = np.sort(counts)[::-1].copy()
        desc.setflags(write=False)
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "descending", desc)

    @property
    def n(self) -> int:
        return int(self.counts.size)

    @property
    def is_integer(self) -> bool:
        return bool(np.all(self.counts == np.floor(self.counts)))

    def exceed_counts(self, upto: int) -> np.ndarray:
        """``#{i : X_i > j - 1}`` for ``j = 1, ..., upto``."""
        asc = self.descending[::-1]
        thresholds = np.arange(upto, dtype=float)
        return self.n - np.searchsorted(asc, thresholds, side="right")


def as_sample(data) -> CitationSample:
    if isinstance(data, CitationSample):
        return data
    return CitationSample(data)


@dataclass(frozen=True)
class EmpiricalSurvival:
    """Right-continuous and left-limit empirical survival functions."""

    sample: CitationSample

    def __call__(self, x: float) -> float:
        return self.open(x)

    def open(self, x: float) -> float:
        # (1/n) #{i : X_i > x}
        asc = self.sample.descending[::-1]
        return (self.sample.n - np.searchsorted(asc, x, side="right")) / self.sample.n

    def closed(self, x: float) -> float:
        # (1/n) #{i : X_i >= x}
        asc = self.sample.descending[::-1]
        return (self.sample.n - np.searchsorted(asc, x, side="left")) / self.sample.n


def empirical_survival(sample, x: float, closed_at_x: bool = False) -> float:
    """Fraction of papers with more than ``x`` citations (at least ``x`` if closed)."""
    surv = EmpiricalSurvival(as_sample(sample))
    return float(surv.closed(x) if closed_at_x else surv.open(x))


def empirical_h(sample) -> float:
    """Empirical h-index ``sup{x >= 0 : n S_n-(x) >= x}``.

    Evaluated as ``max_i min(y_(i), i)`` over the descending order
    statistics, which is exact for real-valued counts and ties.

    >>> empirical_h([5, 4, 3, 2, 1])
    3.0
    >>> empirical_h([3.7, 3.7, 3.7])
    3.0
    """
    s = as_sample(sample)
    ranks = np.arange(1, s.n + 1, dtype=float)
    return float(np.max(np.minimum(s.descending, ranks)))


def empirical_h_integer(sample) -> int:
    """Integer h-index: number of ``j`` with at least ``j`` papers above ``j - 1``.

    Raises :class:`DomainError` when a count is not an integer.
    """
    s = as_sample(sample)
    if not s.is_integer:
        bad = s.counts[s.counts != np.floor(s.counts)][0]
        raise DomainError(f"non-integer citation count {bad!r}")
    exceed = s.exceed_counts(s.n)
    j = np.arange(1, s.n + 1)
    return int(np.count_nonzero(exceed >= j))
