"""Heavy-tailed citation laws: discrete stable and discretized Weibull.

The discrete stable law has pgf ``exp(-lam (1 - s)^alpha)``.  Its
probabilities are the power-series coefficients of ``exp(A(s))`` with
``A(s) = -lam (1 - s)^alpha``; for ``alpha <= 1`` every coefficient of ``A``
past the constant is nonnegative, so the exponential recurrence only adds
nonnegative terms.  Variates are drawn as a Poisson mixture over a positive
stable variable generated with Kanter's representation.
"""

from __future__ import annotations

import math
import threading
import warnings
from dataclasses import dataclass

import numpy as np

from ._jit import USE_NUMBA, njit
from .errors import DomainError
from .moments import (
    IntegerDistribution,
    pareto_asymptotic_variance,
    weibull_asymptotic_variance,
)

__all__ = [
    "DiscreteStable",
    "DiscretizedWeibull",
    "GeometricLaw",
    "TabulatedLaw",
    "discrete_stable_pmf",
    "discrete_stable_survival",
    "discrete_stable_sample",
    "discretized_weibull_survival",
    "discretized_weibull_sample",
    "poisson_sample",
    "COUNT_CAP",
]

# Variates are stored as int64; anything larger is clamped here.  Every
# statistic in this package only compares counts against thresholds <= n.
COUNT_CAP = 2**62

# numpy's Poisson sampler is exact below this mean; above it the rounded
# normal approximation has relative error far below one count per 1e7.
_POISSON_EXACT_MAX = 1e15


def _to_counts(x):
    x = np.asarray(x, dtype=float)
    x = np.where(np.isnan(x), float(COUNT_CAP), x)
    return np.minimum(np.floor(x), float(COUNT_CAP)).astype(np.int64)


def poisson_sample(mean, rng, size=None):
    """Poisson variates for means from 0 up to ~1e300.

    ``rng`` is a :class:`numpy.random.Generator`.  Means above 1e15 use a
    rounded normal approximation.
    """
    scalar = np.ndim(mean) == 0 and size is None
    mean = np.asarray(mean, dtype=float)
    if np.any(mean < 0) or np.any(np.isnan(mean)):
        raise DomainError("Poisson mean must be nonnegative")
    if size is not None:
        mean = np.broadcast_to(mean, size)
    mean = np.minimum(mean, 1e300)
    big = mean > _POISSON_EXACT_MAX
    out = np.empty(mean.shape, dtype=np.int64)
    if (~big).any():
        out[~big] = rng.poisson(mean[~big])
    if big.any():
        m = mean[big]
        out[big] = _to_counts(np.rint(m + np.sqrt(m) * rng.standard_normal(m.shape)))
    return int(out) if scalar else out


# --- discrete stable --------------------------------------------------------


def _stable_log_coefficients(alpha, lam, size):
    """``j a_j`` for ``j = 0..size-1`` where ``A(s) = sum_j a_j s^j``."""
    ja = np.zeros(size)
    c = alpha  # |binom(alpha, j)|, j = 1
    for j in range(1, size):
        ja[j] = j * lam * c
        c *= (j - alpha) / (j + 1)
    return ja


@njit
def _stable_extend_numba(ja, b, start, stop):
    for k in range(start, stop):
        acc = 0.0
        for i in range(1, k + 1):
            acc += ja[i] * b[k - i]
        b[k] = acc / k


def _stable_extend_numpy(ja, b, start, stop):
    for k in range(start, stop):
        b[k] = np.dot(ja[1 : k + 1], b[k - 1 :: -1][:k]) / k


@njit
def _compensated_survival(pmf, start, total, comp, out):
    # out[k] = 1 - sum_{i <= k} pmf[i], Neumaier-compensated running sum
    for k in range(start, pmf.shape[0]):
        x = pmf[k]
        t = total + x
        if abs(total) >= abs(x):
            comp += (total - t) + x
        else:
            comp += (x - t) + total
        total = t
        out[k] = (1.0 - total) - comp
    return total, comp


class _StableTable:
    """Growable pmf / survival prefix table for one ``(alpha, lam)``."""

    def __init__(self, alpha, lam):
        self.alpha = alpha
        self.lam = lam
        self._lock = threading.Lock()
        self._ja = np.zeros(0)
        self.pmf = np.zeros(0)
        self.surv = np.zeros(0)
        self._total = 0.0
        self._comp = 0.0

    def ensure(self, k_max):
        """Make ``pmf`` / ``surv`` cover indices ``0..k_max``; returns both."""
        pmf, surv = self.pmf, self.surv
        if pmf.shape[0] > k_max:
            return pmf, surv
        with self._lock:
            old = self.pmf.shape[0]
            if old > k_max:
                return self.pmf, self.surv
            size = max(k_max + 1, 2 * old, 256)
            ja = _stable_log_coefficients(self.alpha, self.lam, size)
            b = np.empty(size)
            b[:old] = self.pmf
            start = old
            if old == 0:
                b[0] = math.exp(-self.lam)
                start = 1
            if USE_NUMBA:
                _stable_extend_numba(ja, b, start, size)
            else:
                _stable_extend_numpy(ja, b, start, size)
            s = np.empty(size)
            s[:old] = self.surv
            self._total, self._comp = _compensated_survival(b, old, self._total, self._comp, s)
            # publish whole arrays so lock-free readers never see partial state
            self._ja = ja
            self.pmf, self.surv = b, s
            return b, s


_TABLES: dict = {}
_TABLES_LOCK = threading.Lock()


def _stable_table(alpha, lam) -> _StableTable:
    key = (float(alpha), float(lam))
    table = _TABLES.get(key)
    if table is None:
        with _TABLES_LOCK:
            table = _TABLES.setdefault(key, _StableTable(*key))
    return table


def _kanter_log_stable(alpha, u, e):
    """``log`` of a positive stable variate with Laplace transform ``exp(-t^alpha)``.

    Kanter: ``S = (A(U) / E)^((1 - alpha) / alpha)`` with
    ``A(u) = sin(alpha u)^(alpha/(1-alpha)) sin((1-alpha) u) / sin(u)^(1/(1-alpha))``.
    """
    log_a = (
        (alpha / (1.0 - alpha)) * np.log(np.sin(alpha * u))
        + np.log(np.sin((1.0 - alpha) * u))
        - np.log(np.sin(u)) / (1.0 - alpha)
    )
    return (1.0 - alpha) / alpha * (log_a - np.log(e))


def _open_uniform(rng, size):
    u = rng.random(size)
    zero = u == 0.0
    while np.any(zero):
        u[zero] = rng.random(int(np.count_nonzero(zero)))
        zero = u == 0.0
    return u


@dataclass(frozen=True)
class DiscreteStable(IntegerDistribution):
    """Discrete stable law shifted by ``shift``: ``X = shift + Y``, ``E[s^Y] = exp(-lam (1-s)^alpha)``.

    ``shift=1`` gives a law without mass at zero.
    """

    alpha: float
    lam: float
    shift: int = 0

    family = "discrete-stable"

    def __post_init__(self):
        if not 0.0 < self.alpha <= 1.0:
            raise DomainError(f"alpha={self.alpha} outside (0, 1]")
        if not self.lam > 0.0:
            raise DomainError(f"lambda={self.lam} must be positive")
        if int(self.shift) != self.shift or self.shift < 0:
            raise DomainError("shift must be a nonnegative integer")

    @property
    def params(self):
        return {"alpha": self.alpha, "lambda": self.lam, "shift": int(self.shift)}

    def _base_pmf(self, k_max):
        pmf, _ = _stable_table(self.alpha, self.lam).ensure(k_max)
        return pmf

    def survival_array(self, j):
        m = np.asarray(j, dtype=np.int64) - int(self.shift)
        out = np.ones(m.shape)
        pos = m >= 0
        if pos.any():
            _, surv = _stable_table(self.alpha, self.lam).ensure(int(m.max()))
            out[pos] = surv[m[pos]]
        return out

    def pmf_array(self, k):
        m = np.asarray(k, dtype=np.int64) - int(self.shift)
        out = np.zeros(m.shape)
        pos = m >= 0
        if pos.any():
            pmf = self._base_pmf(int(m.max()))
            out[pos] = pmf[m[pos]]
        return out

    def sample(self, rng, size=None):
        shape = () if size is None else size
        if self.alpha == 1.0:
            y = poisson_sample(np.full(shape, self.lam), rng)
        else:
            u = math.pi * _open_uniform(rng, shape)
            e = rng.standard_exponential(shape)
            log_mean = math.log(self.lam) / self.alpha + _kanter_log_stable(self.alpha, u, e)
            y = poisson_sample(np.exp(np.minimum(log_mean, 690.0)), rng)
        y = np.minimum(np.asarray(y, dtype=np.int64), COUNT_CAP - int(self.shift)) + int(self.shift)
        return int(y) if size is None else y

    def closed_form_asymptotic_variance(self, h, n):
        return pareto_asymptotic_variance(h, self.alpha)


def discrete_stable_pmf(params: DiscreteStable, k_max: int) -> np.ndarray:
    """Probabilities ``P(Y = 0..k_max)`` of the unshifted law.

    >>> p = discrete_stable_pmf(DiscreteStable(1.0, 2.0), 2)
    >>> bool(np.allclose(p, np.exp(-2) * np.array([1, 2, 2])))
    True
    """
    if k_max < 0:
        raise DomainError("k_max must be nonnegative")
    return params._base_pmf(int(k_max))[: k_max + 1].copy()


def discrete_stable_survival(params: DiscreteStable, j: int) -> float:
    return params.survival(j)


def discrete_stable_sample(params: DiscreteStable, rng, size=None):
    return params.sample(rng, size)


# --- discretized Weibull ----------------------------------------------------


@dataclass(frozen=True)
class DiscretizedWeibull(IntegerDistribution):
    """Law of ``floor(W)`` with ``P(W > x) = exp(-x^tau)``: ``S(j) = exp(-(j+1)^tau)``."""

    tau: float

    family = "discretized-weibull"

    def __post_init__(self):
        if not self.tau > 0.0:
            raise DomainError(f"tau={self.tau} must be positive")
        if self.tau >= 0.5:
            warnings.warn(
                f"tau={self.tau} >= 1/2: normal-based confidence sets lack "
                "large-sample justification for this Weibull-type law",
                UserWarning,
                stacklevel=3,
            )

    @property
    def params(self):
        return {"tau": self.tau}

    def survival_array(self, j):
        j = np.asarray(j, dtype=np.int64)
        out = np.exp(-np.power(np.maximum(j + 1, 0).astype(float), self.tau))
        return np.where(j < 0, 1.0, out)

    def pmf_array(self, k):
        k = np.asarray(k, dtype=np.int64)
        kf = np.maximum(k, 1).astype(float)
        # (k+1)^tau - k^tau without cancellation
        gap = np.power(kf, self.tau) * np.expm1(self.tau * np.log1p(1.0 / kf))
        out = np.exp(-np.power(kf, self.tau)) * -np.expm1(-gap)
        out = np.where(k == 0, -math.expm1(-1.0), out)
        return np.where(k < 0, 0.0, out)

    def sample(self, rng, size=None):
        e = rng.standard_exponential(() if size is None else size)
        with np.errstate(over="ignore"):
            y = _to_counts(np.power(e, 1.0 / self.tau))
        return int(y) if size is None else y

    def closed_form_asymptotic_variance(self, h, n):
        return weibull_asymptotic_variance(h, self.tau, n)


def discretized_weibull_survival(params: DiscretizedWeibull, j: int) -> float:
    return params.survival(j)


def discretized_weibull_sample(params: DiscretizedWeibull, rng, size=None):
    return params.sample(rng, size)


# --- small laws used for checks and diagnostics ------------------------------


@dataclass(frozen=True)
class GeometricLaw(IntegerDistribution):
    """``S(j) = q^(j+1)``; ``psi(n) / S(n)`` is constant, so the variance stays bounded."""

    q: float = 0.5

    family = "geometric"

    def __post_init__(self):
        if not 0.0 < self.q < 1.0:
            raise DomainError("q must lie in (0, 1)")

    @property
    def params(self):
        return {"q": self.q}

    def survival_array(self, j):
        j = np.asarray(j, dtype=np.int64)
        return np.where(j < 0, 1.0, np.power(self.q, (j + 1).astype(float)))

    def sample(self, rng, size=None):
        y = rng.geometric(1.0 - self.q, size) - 1
        return int(y) if size is None else y.astype(np.int64)


@dataclass(frozen=True, eq=False)
class TabulatedLaw(IntegerDistribution):
    """Explicit probabilities on ``0..K`` plus a geometric tail.

    ``head`` holds ``P(X = 0..K)``; the remaining mass ``1 - sum(head)``
    (which must be positive) sits on ``K+1, K+2, ...`` with survival
    decaying by ``tail_ratio`` per step.
    """

    head: tuple
    tail_ratio: float = 0.5

    family = "tabulated"

    def __post_init__(self):
        head = np.asarray(self.head, dtype=float)
        if head.ndim != 1 or head.size == 0 or np.any(head < 0):
            raise DomainError("head must be a nonempty vector of probabilities")
        if not 1.0 - head.sum() > 0.0:
            raise DomainError("head must leave positive tail mass")
        if not 0.0 < self.tail_ratio < 1.0:
            raise DomainError("tail_ratio must lie in (0, 1)")
        object.__setattr__(self, "head", tuple(head.tolist()))

    @property
    def params(self):
        return {"K": len(self.head) - 1}

    def survival_array(self, j):
        j = np.asarray(j, dtype=np.int64)
        head = np.asarray(self.head)
        k = head.size - 1
        surv_head = 1.0 - np.cumsum(head)
        eps = surv_head[-1]
        out = np.ones(j.shape)
        mid = (j >= 0) & (j <= k)
        out[mid] = surv_head[j[mid]]
        far = j > k
        out[far] = eps * np.power(self.tail_ratio, (j[far] - k).astype(float))
        return out

    def sample(self, rng, size=None):
        shape = () if size is None else size
        u = rng.random(shape)
        head = np.asarray(self.head)
        idx = np.searchsorted(np.cumsum(head), u, side="right")
        k = head.size - 1
        tail = idx > k
        extra = rng.geometric(1.0 - self.tail_ratio, shape) - 1
        y = np.where(tail, k + 1 + extra, idx).astype(np.int64)
        return int(y) if size is None else y
