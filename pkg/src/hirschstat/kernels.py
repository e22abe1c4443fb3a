"""Batch statistics over many replicated samples.

Each replication needs the integer h-index, the plug-in variance estimate
and the confidence-set endpoints.  Plug-in probabilities only take the
values ``P(Bin(n, c/n) >= j)`` for integer ``c, j <= n``, so for moderate
``n`` they are tabulated once and looked up.  Two interchangeable
implementations exist: compiled per-row loops and a vectorized numpy path.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from ._jit import USE_NUMBA, njit
from .special import _binom_tail, binomial_tail_array

__all__ = ["tail_table", "batch_statistics", "TABLE_MAX_N"]

TABLE_MAX_N = 2048


@lru_cache(maxsize=32)
def tail_table(n: int) -> np.ndarray:
    """``T[c, j] = P(Bin(n, c/n) >= j)`` for ``0 <= c, j <= n``."""
    c = np.arange(n + 1)[:, None]
    j = np.arange(n + 1)[None, :]
    table = binomial_tail_array(n, c / n, j)
    table.setflags(write=False)
    return table


@njit
def _round_half_away(x):
    if x >= 0:
        return math.floor(x + 0.5)
    return -math.floor(-x + 0.5)


@njit
def _batch_numba(samples, table, use_table, z, h_out, v_out, lo_out, hi_out):
    reps, n = samples.shape
    hist = np.zeros(n + 1, dtype=np.int64)
    above = np.zeros(n + 1, dtype=np.int64)
    p = np.zeros(n + 1)
    for r in range(reps):
        hist[:] = 0
        for i in range(n):
            x = samples[r, i]
            if x > n:
                x = n
            hist[x] += 1
        # above[j] = #{X_i >= j} = #{X_i > j - 1}
        run = 0
        for j in range(n, 0, -1):
            run += hist[j]
            above[j] = run
        h = 0
        while h < n and above[h + 1] >= h + 1:
            h += 1
        top = 3 * h
        if top > n:
            top = n
        for j in range(1, top + 1):
            if use_table:
                p[j] = table[above[j], j]
            else:
                p[j] = _binom_tail(n, above[j] / n, j)
        # sum p_j (1 - p_j) + 2 sum_l p_l sum_{j<l} (1 - p_j)
        diag = 0.0
        cross = 0.0
        before = 0.0
        for j in range(1, top + 1):
            q = 1.0 - p[j]
            diag += p[j] * q
            cross += p[j] * before
            before += q
        v = diag + 2.0 * cross
        half = z * math.sqrt(v)
        lo = _round_half_away(h - half)
        if lo < 0:
            lo = 0
        h_out[r] = h
        v_out[r] = v
        lo_out[r] = lo
        hi_out[r] = _round_half_away(h + half)


def _batch_numpy(samples, z):
    reps, n = samples.shape
    clipped = np.minimum(samples, n)
    offsets = (n + 1) * np.arange(reps)[:, None]
    hist = np.bincount((clipped + offsets).ravel(), minlength=reps * (n + 1))
    hist = hist.reshape(reps, n + 1)
    at_least = np.cumsum(hist[:, ::-1], axis=1)[:, ::-1]
    above = at_least[:, 1:]  # column j-1 holds #{X_i >= j}
    j = np.arange(1, n + 1)
    h = np.count_nonzero(above >= j, axis=1)
    top = np.minimum(3 * h, n)
    mask = j[None, :] <= top[:, None]

    p = np.zeros((reps, n))
    if n <= TABLE_MAX_N:
        p[mask] = tail_table(n)[above, j[None, :]][mask]
    else:
        jj = np.broadcast_to(j, (reps, n))
        p[mask] = binomial_tail_array(n, above[mask] / n, jj[mask])
    q = np.where(mask, 1.0 - p, 0.0)
    before = np.cumsum(q, axis=1) - q
    v = np.sum(p * q, axis=1) + 2.0 * np.sum(p * before, axis=1)

    half = z * np.sqrt(v)
    lo = np.maximum(0, _round_half_away_np(h - half))
    hi = _round_half_away_np(h + half)
    return h.astype(np.int64), v, lo.astype(np.int64), hi.astype(np.int64)


def _round_half_away_np(x):
    return np.copysign(np.floor(np.abs(x) + 0.5), x)


def batch_statistics(samples, z: float, backend: str | None = None):
    """Per-row ``(h, v, ci_lo, ci_hi)`` for an integer ``(reps, n)`` array.

    ``z`` is the normal quantile of the confidence set.  ``backend`` forces
    ``"numba"`` or ``"numpy"``; by default the compiled path is used when
    available.
    """
    samples = np.ascontiguousarray(samples, dtype=np.int64)
    if samples.ndim != 2 or samples.shape[1] == 0:
        raise ValueError("samples must be a nonempty (reps, n) array")
    if np.any(samples < 0):
        raise ValueError("citation counts must be nonnegative")
    backend = backend or ("numba" if USE_NUMBA else "numpy")
    if backend == "numpy":
        return _batch_numpy(samples, float(z))
    if backend != "numba":
        raise ValueError(f"unknown backend {backend!r}")

    reps, n = samples.shape
    use_table = n <= TABLE_MAX_N
    table = tail_table(n) if use_table else np.zeros((1, 1))
    h = np.empty(reps, dtype=np.int64)
    v = np.empty(reps)
    lo = np.empty(reps, dtype=np.int64)
    hi = np.empty(reps, dtype=np.int64)
    _batch_numba(samples, table, use_table, float(z), h, v, lo, hi)
    return h, v, lo, hi
