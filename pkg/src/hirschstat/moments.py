"""Theoretical h-index and exact finite-sample moments of the integer h-index.

For an integer-valued citation law with survival ``S(j) = P(X > j)`` the
integer empirical h-index is a sum of nested indicators
``Y_j = 1[#{X_i > j - 1} >= j]`` with ``P(Y_j = 1) = p_j``, a binomial upper
tail at success probability ``S(j - 1)``.  Mean and variance follow from
the ``p_j`` alone because ``Y_j = 1`` implies ``Y_l = 1`` for all ``l < j``.
"""

from __future__ import annotations

import abc
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateLawWarning, DomainError
from .special import binomial_tail, binomial_tail_array, normal_sf

__all__ = [
    "IntegerDistribution",
    "MomentReport",
    "ConditionDiagnostics",
    "theoretical_h",
    "p_jn",
    "p_vector",
    "exact_mean",
    "exact_variance",
    "normal_approx_p",
    "asymptotic_variance",
    "pareto_asymptotic_variance",
    "weibull_asymptotic_variance",
    "condition_diagnostics",
    "moment_report",
]

# p_j below this and j past twice h_n: remaining terms are negligible.
TAIL_CUTOFF = 1e-15


class IntegerDistribution(abc.ABC):
    """A citation law on the nonnegative integers.

    Subclasses implement :meth:`survival_array`; everything else derives
    from it.  Implementations must be safe to call from several threads.
    """

    family = "integer"

    @abc.abstractmethod
    def survival_array(self, j) -> np.ndarray:
        """``P(X > j)`` for an integer array ``j >= -1``."""

    def survival(self, j: int) -> float:
        return float(self.survival_array(np.array([j]))[0])

    def pmf_array(self, k) -> np.ndarray:
        k = np.asarray(k, dtype=np.int64)
        out = self.survival_array(k - 1) - self.survival_array(k)
        return np.where(k < 0, 0.0, out)

    def pmf(self, k: int) -> float:
        return float(self.pmf_array(np.array([k]))[0])

    def sample(self, rng, size=None):
        raise NotImplementedError(f"{type(self).__name__} has no sampler")

    def closed_form_asymptotic_variance(self, h: float, n: int):
        """Family-specific large-sample variance, or ``None``."""
        return None

    @property
    def params(self) -> dict:
        return {}

    @property
    def label(self) -> str:
        inner = ", ".join(f"{k}={v}" for k, v in self.params.items())
        return f"{self.family}({inner})"


def theoretical_h(dist: IntegerDistribution, n: int) -> int:
    """``max{j : n S(j - 1) >= j}``, scanning outward in doubling blocks.

    Returns 0 with a :class:`DegenerateLawWarning` when ``n S(0) < 1``.
    """
    n = int(n)
    if n < 1:
        raise DomainError("sample size must be at least 1")
    if n * dist.survival(0) < 1:
        warnings.warn(
            f"n*S(0) < 1 for {dist.label} at n={n}; theoretical h-index is 0",
            DegenerateLawWarning,
            stacklevel=2,
        )
        return 0

    # n S(j - 1) - j is strictly decreasing in j
    lo, block = 1, 64
    while lo <= n:
        hi = min(n, lo + block - 1)
        j = np.arange(lo, hi + 1)
        ok = n * dist.survival_array(j - 1) >= j
        if not ok.all():
            return int(lo + np.argmin(ok) - 1)
        lo, block = hi + 1, block * 2
    return n


def p_jn(dist: IntegerDistribution, n: int, j: int) -> float:
    """``P(#{X_i > j - 1} >= j)`` for a sample of size ``n``; 0 for ``j > n``."""
    n, j = int(n), int(j)
    if j > n:
        return 0.0
    if j < 1:
        raise DomainError("index j must be at least 1")
    return binomial_tail(n, dist.survival(j - 1), j)


def p_vector(dist: IntegerDistribution, n: int, full: bool = False) -> np.ndarray:
    """``(p_1, ..., p_J)``.

    ``J = n`` when ``full``; otherwise the vector stops at the first ``j``
    beyond ``2 h_n`` whose ``p_j`` falls below ``TAIL_CUTOFF`` (``p_j`` is
    nonincreasing, so every omitted term is smaller still).
    """
    n = int(n)
    if n < 1:
        raise DomainError("sample size must be at least 1")
    if full:
        j = np.arange(1, n + 1)
        return binomial_tail_array(n, dist.survival_array(j - 1), j)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateLawWarning)
        h = theoretical_h(dist, n)
    chunks = []
    lo = 1
    block = max(64, 2 * h + 16)
    while lo <= n:
        hi = min(n, lo + block - 1)
        j = np.arange(lo, hi + 1)
        p = binomial_tail_array(n, dist.survival_array(j - 1), j)
        stop = np.nonzero((p < TAIL_CUTOFF) & (j > 2 * h))[0]
        if stop.size:
            chunks.append(p[: stop[0]])
            break
        chunks.append(p)
        lo = hi + 1
    return np.concatenate(chunks)


def exact_mean(dist: IntegerDistribution, n: int) -> float:
    """Expected integer h-index ``sum_j p_j``."""
    return float(np.sum(p_vector(dist, n)))


def _variance_from_p(p: np.ndarray) -> float:
    # sum_j r_j (1 - p_j), r_j = p_j + 2 sum_{l > j} p_l
    later = np.cumsum(p[::-1])[::-1] - p
    r = p + 2.0 * later
    return float(np.sum(r * (1.0 - p)))


def exact_variance(dist: IntegerDistribution, n: int) -> float:
    """Variance of the integer h-index from one suffix-sum pass over the ``p_j``."""
    return _variance_from_p(p_vector(dist, n))


def normal_approx_p(dist: IntegerDistribution, n: int, j: int):
    """Gaussian approximation ``G(x)`` to ``p_j`` with ``x = (j - n S) / v``.

    Returns ``(approx, x, v)`` where ``v^2 = n S (1 - S)`` and ``S = S(j - 1)``.
    """
    n, j = int(n), int(j)
    if not 1 <= j <= n:
        raise DomainError("index j must satisfy 1 <= j <= n")
    s = dist.survival(j - 1)
    if s <= 0.0 or s >= 1.0:
        raise DomainError("degenerate Bernoulli")
    v = math.sqrt(n * s * (1.0 - s))
    x = (j - n * s) / v
    return normal_sf(x), x, v


def pareto_asymptotic_variance(h: float, alpha: float) -> float:
    """Large-sample variance ``h / (1 + alpha)^2`` for Pareto-type tails."""
    if h <= 0:
        raise DomainError("h must be positive")
    if alpha < 0:
        raise DomainError("alpha must be nonnegative")
    return h / (1.0 + alpha) ** 2


def weibull_asymptotic_variance(h: float, tau: float, n: int) -> float:
    """Large-sample variance ``h / (1 + tau log(n / h))^2`` for Weibull-type tails."""
    if not 0 < h <= n:
        raise DomainError("h must satisfy 0 < h <= n")
    return h / (1.0 + tau * math.log(n / h)) ** 2


def asymptotic_variance(dist: IntegerDistribution, n: int) -> float:
    """``h_n / (1 + n psi(h_n))^2`` with ``psi`` the probability function."""
    h = theoretical_h(dist, n)
    if h == 0:
        return 0.0
    return h / (1.0 + n * dist.pmf(h)) ** 2


@dataclass(frozen=True)
class ConditionDiagnostics:
    """Smoothness statistics of ``psi`` along ``n = 1..n_max``.

    ``local_ratio[n-1]`` is ``sqrt(n) psi(n) / S(n)`` (must vanish for the
    variance to diverge); ``window_deviation[n-1]`` is
    ``max |psi(j) / psi(n) - 1|`` over integers ``j`` within ``M sqrt(n)``
    of ``n`` (must vanish for the variance estimator to be consistent).
    """

    n: np.ndarray
    local_ratio: np.ndarray
    window_deviation: np.ndarray
    window: float


def condition_diagnostics(dist: IntegerDistribution, n_max: int, window: float = 1.0):
    n_max = int(n_max)
    if n_max < 1:
        raise DomainError("n_max must be at least 1")
    ns = np.arange(1, n_max + 1)
    reach = int(math.floor(n_max + window * math.sqrt(n_max))) + 1
    psi = dist.pmf_array(np.arange(0, reach + 1))
    surv = dist.survival_array(ns)
    with np.errstate(divide="ignore", invalid="ignore"):
        local = np.sqrt(ns) * psi[ns] / surv
        dev = np.empty(n_max)
        for idx, n in enumerate(ns):
            half = window * math.sqrt(n)
            a = max(0, int(math.ceil(n - half)))
            b = int(math.floor(n + half))
            dev[idx] = np.max(np.abs(psi[a : b + 1] / psi[n] - 1.0))
    return ConditionDiagnostics(ns, local, dev, float(window))


@dataclass(frozen=True)
class MomentReport:
    law: str
    n: int
    h_n: int
    exact_mean: float
    exact_variance: float
    asymptotic_variance: float
    closed_form_variance: float | None = None
    degenerate: bool = False

    def as_dict(self) -> dict:
        return {
            "law": self.law,
            "n": self.n,
            "h_n": self.h_n,
            "exact_mean": self.exact_mean,
            "exact_variance": self.exact_variance,
            "asymptotic_variance": self.asymptotic_variance,
            "closed_form_variance": self.closed_form_variance,
            "degenerate": self.degenerate,
        }


def moment_report(dist: IntegerDistribution, n: int) -> MomentReport:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", DegenerateLawWarning)
        h = theoretical_h(dist, n)
    degenerate = any(issubclass(w.category, DegenerateLawWarning) for w in caught)
    if degenerate:
        warnings.warn(str(caught[0].message), DegenerateLawWarning, stacklevel=2)
    closed = dist.closed_form_asymptotic_variance(h, n) if h > 0 else None
    return MomentReport(
        law=dist.label,
        n=int(n),
        h_n=h,
        exact_mean=exact_mean(dist, n),
        exact_variance=exact_variance(dist, n),
        asymptotic_variance=asymptotic_variance(dist, n) if h > 0 else 0.0,
        closed_form_variance=closed,
        degenerate=degenerate,
    )
