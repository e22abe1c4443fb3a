"""Nonparametric variance estimation, confidence sets and two-scholar tests."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import CitationSample, as_sample, empirical_h_integer
from .errors import DegenerateStatisticError, DomainError
from .special import binomial_tail, binomial_tail_array, normal_quantile, normal_sf

__all__ = [
    "HIndexReport",
    "HomogeneityResult",
    "plug_in_p",
    "plug_in_p_vector",
    "variance_estimate",
    "confidence_set",
    "round_half_away",
    "homogeneity_statistic",
    "homogeneity_test",
]


def _integer_sample(sample) -> CitationSample:
    s = as_sample(sample)
    if not s.is_integer:
        bad = s.counts[s.counts != np.floor(s.counts)][0]
        raise DomainError(f"non-integer citation count {bad!r}")
    return s


def plug_in_p(sample, j: int) -> float:
    """Estimate of ``p_j``: binomial tail at the empirical ``S_n(j - 1)``."""
    s = _integer_sample(sample)
    j = int(j)
    if not 1 <= j <= s.n:
        raise DomainError("index j must satisfy 1 <= j <= n")
    above = int(s.exceed_counts(j)[-1])
    return binomial_tail(s.n, above / s.n, j)


def plug_in_p_vector(sample, upto: int | None = None) -> np.ndarray:
    """``(p^_1, ..., p^_upto)``; ``upto`` defaults to ``n``."""
    s = _integer_sample(sample)
    upto = s.n if upto is None else min(int(upto), s.n)
    if upto <= 0:
        return np.zeros(0)
    j = np.arange(1, upto + 1)
    return binomial_tail_array(s.n, s.exceed_counts(upto) / s.n, j)


def _truncated_variance(p: np.ndarray) -> float:
    # sum_j p_j (1 - p_j) + 2 sum_{l >= 2} p_l sum_{j < l} (1 - p_j)
    if p.size == 0:
        return 0.0
    q = 1.0 - p
    before = np.cumsum(q) - q
    return float(np.sum(p * q) + 2.0 * np.sum(p * before))


def variance_estimate(sample, truncate: bool = True) -> float:
    """Plug-in variance of the empirical h-index.

    Sums run to ``J = min(3 H, n)``; ``truncate=False`` uses ``J = n``.
    """
    s = _integer_sample(sample)
    h = empirical_h_integer(s)
    upto = min(3 * h, s.n) if truncate else s.n
    return _truncated_variance(plug_in_p_vector(s, upto))


def round_half_away(x: float) -> int:
    """Nearest integer, halves rounded away from zero."""
    return int(math.copysign(math.floor(abs(x) + 0.5), x))


@dataclass(frozen=True)
class HIndexReport:
    n: int
    h_hat: int
    v_hat: float
    confidence_level: float
    ci_lo: int
    ci_hi: int

    @property
    def members(self) -> range:
        return range(self.ci_lo, self.ci_hi + 1)

    def __contains__(self, h) -> bool:
        return self.ci_lo <= h <= self.ci_hi


def interval_bounds(h: float, v: float, z: float):
    half = z * math.sqrt(v)
    return max(0, round_half_away(h - half)), round_half_away(h + half)


def confidence_set(sample, level: float = 0.95) -> HIndexReport:
    """Large-sample confidence set ``{[[H - z sqrt(V)]], ..., [[H + z sqrt(V)]]}``.

    The lower end is clamped at zero.
    """
    level = float(level)
    if not 0.0 < level < 1.0:
        raise DomainError(f"confidence level {level!r} outside (0, 1)")
    s = _integer_sample(sample)
    h = empirical_h_integer(s)
    v = variance_estimate(s)
    z = normal_quantile(0.5 + level / 2.0)
    lo, hi = interval_bounds(h, v, z)
    return HIndexReport(s.n, h, v, level, lo, hi)


@dataclass(frozen=True)
class HomogeneityResult:
    t_stat: float
    p_value: float
    first: HIndexReport | None = None
    second: HIndexReport | None = None
    one_sided: bool = False


def homogeneity_statistic(h1, v1, h2, v2, one_sided: bool = False):
    """``T = (h1 - h2) / sqrt(v1 + v2)`` and its normal p-value.

    The one-sided p-value is ``P(Z >= T)`` (alternative: first index larger).
    """
    total = v1 + v2
    if total <= 0:
        raise DegenerateStatisticError("degenerate variance: test undefined")
    t = (h1 - h2) / math.sqrt(total)
    p = normal_sf(t) if one_sided else min(1.0, 2.0 * normal_sf(abs(t)))
    return t, p


def homogeneity_test(sample1, sample2, one_sided: bool = False, level: float = 0.95):
    """Compare the h-indexes of two scholars; sample sizes may differ."""
    r1 = confidence_set(sample1, level)
    r2 = confidence_set(sample2, level)
    t, p = homogeneity_statistic(r1.h_hat, r1.v_hat, r2.h_hat, r2.v_hat, one_sided)
    return HomogeneityResult(t, p, r1, r2, one_sided)
