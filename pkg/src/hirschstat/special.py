"""Binomial tail probabilities and standard normal helpers.

The binomial upper tail ``P(Bin(n, p) >= j)`` is evaluated as the
regularized incomplete beta function ``I_p(j, n - j + 1)`` by Lentz's
continued fraction.  The prefactor ``p^j q^(n-j+1) / B(j, n-j+1)`` is
obtained from the binomial point probability computed with Loader's
saddle-point expansion (``stirlerr`` + ``bd0``), which keeps full relative
accuracy for large ``n`` where differences of ``lgamma`` values would lose
digits.
"""

import math
from statistics import NormalDist

import numpy as np

from ._jit import USE_NUMBA, njit
from .errors import DomainError

__all__ = [
    "binomial_tail",
    "binomial_tail_array",
    "binomial_pmf",
    "normal_sf",
    "normal_quantile",
]

_LN_2PI = math.log(2.0 * math.pi)
_CF_EPS = 1e-16
_CF_TINY = 1e-300
_CF_MAXIT = 200_000

# stirlerr(k) = lgamma(k + 1) - (k + 1/2) log k + k - log(sqrt(2 pi)), k <= 15.
_STIRLERR_SMALL = np.array(
    [0.0]
    + [
        math.lgamma(k + 1.0) - (k + 0.5) * math.log(k) + k - 0.5 * _LN_2PI
        for k in range(1, 16)
    ]
)


@njit
def _stirlerr(k):
    if k <= 15.0:
        return _STIRLERR_SMALL[int(k)]
    kk = k * k
    s0 = 1.0 / 12.0
    s1 = 1.0 / 360.0
    s2 = 1.0 / 1260.0
    s3 = 1.0 / 1680.0
    s4 = 1.0 / 1188.0
    if k > 500.0:
        return (s0 - s1 / kk) / k
    if k > 80.0:
        return (s0 - (s1 - s2 / kk) / kk) / k
    if k > 35.0:
        return (s0 - (s1 - (s2 - s3 / kk) / kk) / kk) / k
    return (s0 - (s1 - (s2 - (s3 - s4 / kk) / kk) / kk) / kk) / k


@njit
def _bd0(x, mean):
    """Deviance term ``x log(x / mean) + mean - x`` without cancellation."""
    if abs(x - mean) < 0.1 * (x + mean):
        v = (x - mean) / (x + mean)
        s = (x - mean) * v
        ej = 2.0 * x * v
        v = v * v
        for i in range(1, 1000):
            ej *= v
            s1 = s + ej / (2 * i + 1)
            if s1 == s:
                return s1
            s = s1
        return s
    return x * math.log(x / mean) + mean - x


@njit
def _dbinom(x, n, p, q):
    """Binomial point probability for integer-valued floats ``x`` and ``n``."""
    if p == 0.0:
        return 1.0 if x == 0.0 else 0.0
    if q == 0.0:
        return 1.0 if x == n else 0.0
    if x == 0.0:
        if n == 0.0:
            return 1.0
        if p < 0.1:
            return math.exp(-_bd0(n, n * q) - n * p)
        return math.exp(n * math.log(q))
    if x == n:
        if q < 0.1:
            return math.exp(-_bd0(n, n * p) - n * q)
        return math.exp(n * math.log(p))
    if x < 0.0 or x > n:
        return 0.0
    lc = (
        _stirlerr(n)
        - _stirlerr(x)
        - _stirlerr(n - x)
        - _bd0(x, n * p)
        - _bd0(n - x, n * q)
    )
    lf = _LN_2PI + math.log(x) + math.log1p(-x / n)
    return math.exp(lc - 0.5 * lf)


@njit
def _betacf(a, b, x):
    """Continued fraction for I_x(a, b) (modified Lentz)."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _CF_TINY:
        d = _CF_TINY
    d = 1.0 / d
    h = d
    for m in range(1, _CF_MAXIT):
        m2 = 2.0 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _CF_EPS:
            break
    return h


@njit
def _binom_tail(n, p, j):
    # P(Bin(n, p) >= j); arguments already validated, n and j integers.
    if j <= 0:
        return 1.0
    if j > n:
        return 0.0
    if p <= 0.0:
        return 0.0
    if p >= 1.0:
        return 1.0
    q = 1.0 - p
    a = float(j)
    b = float(n - j + 1)
    # bt = p^a q^b / B(a, b) = j * q * dbinom(j; n, p)
    bt = a * q * _dbinom(a, float(n), p, q)
    if p < (a + 1.0) / (a + b + 2.0):
        return bt * _betacf(a, b, p) / a
    return 1.0 - bt * _betacf(b, a, q) / b


@njit
def _binom_tail_vector(n, p, j):
    out = np.empty(p.shape[0])
    for i in range(p.shape[0]):
        out[i] = _binom_tail(n, p[i], j[i])
    return out


@njit
def _normal_sf(x):
    return 0.5 * math.erfc(x / math.sqrt(2.0))


# --- vectorized numpy path -------------------------------------------------


def _stirlerr_np(k):
    k = np.asarray(k, dtype=float)
    out = np.empty_like(k)
    small = k <= 15.0
    out[small] = _STIRLERR_SMALL[k[small].astype(np.int64)]
    kb = k[~small]
    kk = kb * kb
    s0, s1, s2, s3, s4 = 1 / 12, 1 / 360, 1 / 1260, 1 / 1680, 1 / 1188
    # the five-term series is accurate to double precision for all k > 15
    out[~small] = (s0 - (s1 - (s2 - (s3 - s4 / kk) / kk) / kk) / kk) / kb
    return out


def _bd0_np(x, mean):
    x = np.asarray(x, dtype=float)
    mean = np.asarray(mean, dtype=float)
    out = np.empty(np.broadcast(x, mean).shape)
    x, mean = np.broadcast_arrays(x, mean)
    near = np.abs(x - mean) < 0.1 * (x + mean)
    xf, mf = x[~near], mean[~near]
    # a subnormal mean overflows the ratio; the deviance is then +inf and
    # the point probability underflows to zero, as it should
    with np.errstate(over="ignore", divide="ignore"):
        out[~near] = xf * np.log(xf / mf) + mf - xf
    if near.any():
        xn, mn = x[near], mean[near]
        v = (xn - mn) / (xn + mn)
        s = (xn - mn) * v
        ej = 2.0 * xn * v
        v2 = v * v
        active = np.ones(s.shape, dtype=bool)
        for i in range(1, 1000):
            ej = ej * v2
            s1 = s + ej / (2 * i + 1)
            done = s1 == s
            s = np.where(active, s1, s)
            active &= ~done
            if not active.any():
                break
        out[near] = s
    return out


def _betacf_np(a, b, x):
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = np.ones_like(x)
    d = 1.0 - qab * x / qap
    d = np.where(np.abs(d) < _CF_TINY, _CF_TINY, d)
    d = 1.0 / d
    h = d.copy()
    active = np.ones(x.shape, dtype=bool)
    for m in range(1, _CF_MAXIT):
        m2 = 2.0 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        d = np.where(np.abs(d) < _CF_TINY, _CF_TINY, d)
        c = 1.0 + aa / c
        c = np.where(np.abs(c) < _CF_TINY, _CF_TINY, c)
        d = 1.0 / d
        h = np.where(active, h * d * c, h)
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        d = np.where(np.abs(d) < _CF_TINY, _CF_TINY, d)
        c = 1.0 + aa / c
        c = np.where(np.abs(c) < _CF_TINY, _CF_TINY, c)
        d = 1.0 / d
        delta = d * c
        h = np.where(active, h * delta, h)
        active &= ~(np.abs(delta - 1.0) < _CF_EPS)
        if not active.any():
            break
    return h


def _dbinom_np(x, n, p, q):
    """Interior binomial point probabilities (0 < x < n, 0 < p < 1)."""
    lc = (
        _stirlerr_np(n)
        - _stirlerr_np(x)
        - _stirlerr_np(n - x)
        - _bd0_np(x, n * p)
        - _bd0_np(n - x, n * q)
    )
    lf = _LN_2PI + np.log(x) + np.log1p(-x / n)
    return np.exp(lc - 0.5 * lf)


def _dbinom_edge_np(x, n, p, q):
    out = np.empty(x.shape)
    for i in range(x.shape[0]):
        out[i] = _dbinom(x[i], n, p[i], q[i])
    return out


def _binom_tail_numpy(n, p, j):
    p = np.asarray(p, dtype=float)
    j = np.asarray(j, dtype=np.int64)
    p, j = np.broadcast_arrays(p, j)
    out = np.empty(p.shape)
    out[j <= 0] = 1.0
    out[j > n] = 0.0
    mid = (j > 0) & (j <= n)
    out[mid & (p <= 0.0)] = 0.0
    out[mid & (p >= 1.0)] = 1.0
    work = mid & (p > 0.0) & (p < 1.0)
    if not work.any():
        return out

    pw = p[work]
    qw = 1.0 - pw
    a = j[work].astype(float)
    b = float(n) - a + 1.0
    nf = float(n)
    dens = np.empty(pw.shape)
    interior = a < nf
    dens[interior] = _dbinom_np(a[interior], nf, pw[interior], qw[interior])
    if (~interior).any():
        dens[~interior] = _dbinom_edge_np(a[~interior], nf, pw[~interior], qw[~interior])
    bt = a * qw * dens

    direct = pw < (a + 1.0) / (a + b + 2.0)
    res = np.empty(pw.shape)
    if direct.any():
        res[direct] = bt[direct] * _betacf_np(a[direct], b[direct], pw[direct]) / a[direct]
    flip = ~direct
    if flip.any():
        res[flip] = 1.0 - bt[flip] * _betacf_np(b[flip], a[flip], qw[flip]) / b[flip]
    out[work] = res
    return out


# --- public API ------------------------------------------------------------


def binomial_tail(n, p, j):
    """Return ``P(Bin(n, p) >= j)``.

    ``j <= 0`` gives 1 and ``j > n`` gives 0.

    >>> round(binomial_tail(4, 0.3, 2), 4)
    0.3483
    """
    n = int(n)
    if n < 0:
        raise DomainError("number of trials must be nonnegative")
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"success probability {p!r} outside [0, 1]")
    return float(_binom_tail(n, p, int(j)))


def binomial_tail_array(n, p, j):
    """Vectorized :func:`binomial_tail` over arrays ``p`` and ``j`` (broadcast)."""
    n = int(n)
    p = np.asarray(p, dtype=float)
    if np.any((p < 0.0) | (p > 1.0)) or np.any(np.isnan(p)):
        raise DomainError("success probabilities must lie in [0, 1]")
    p, j = np.broadcast_arrays(p, np.asarray(j, dtype=np.int64))
    shape = p.shape
    if USE_NUMBA:
        flat = _binom_tail_vector(
            n, np.ascontiguousarray(p.ravel()), np.ascontiguousarray(j.ravel())
        )
        return flat.reshape(shape)
    return _binom_tail_numpy(n, p.ravel(), j.ravel()).reshape(shape)


def binomial_pmf(n, p, k):
    """``P(Bin(n, p) = k)`` via the saddle-point expansion."""
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"success probability {p!r} outside [0, 1]")
    if k < 0 or k > n:
        return 0.0
    return float(_dbinom(float(k), float(n), float(p), 1.0 - float(p)))


def normal_sf(x):
    """Standard normal survival function ``P(Z > x)``."""
    return float(_normal_sf(float(x)))


_STD_NORMAL = NormalDist()


def normal_quantile(q):
    """Inverse standard normal CDF."""
    q = float(q)
    if not 0.0 < q < 1.0:
        raise DomainError(f"quantile level {q!r} outside (0, 1)")
    return _STD_NORMAL.inv_cdf(q)
