"""Monte Carlo study of the empirical h-index and its confidence sets.

Replication ``r`` at sample size ``n`` always draws from its own generator,
seeded from ``(master_seed, n, r)`` through :class:`numpy.random.SeedSequence`
spawn keys, so results do not depend on how replications are split across
workers.  Per-replication statistics are gathered into arrays in
replication order before any reduction, which fixes the floating-point
summation order.
"""

from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .distributions import DiscreteStable, DiscretizedWeibull
from .errors import DomainError, SimulationError
from .kernels import batch_statistics
from .moments import (
    IntegerDistribution,
    asymptotic_variance,
    exact_mean,
    exact_variance,
    theoretical_h,
)
from .special import normal_quantile

__all__ = [
    "StudyConfig",
    "StudyRow",
    "CellResult",
    "STUDY_LAWS",
    "STUDY_SAMPLE_SIZES",
    "replication_rng",
    "draw_replications",
    "simulate_cell",
    "coverage_check",
    "run_study",
    "resolve_jobs",
]

STUDY_SAMPLE_SIZES = (30, 50, 100, 150, 200)

# The six citation laws of the standard coverage study.  The discrete stable
# laws are shifted by one so that every paper has at least one citation.
STUDY_LAWS = (
    DiscreteStable(0.25, 1.0, shift=1),
    DiscreteStable(0.50, 1.5, shift=1),
    DiscreteStable(0.75, 2.0, shift=1),
    DiscretizedWeibull(0.01),
    DiscretizedWeibull(0.10),
    DiscretizedWeibull(0.40),
)

CHUNK = 512


def resolve_jobs(jobs=None) -> int:
    """Worker count: explicit value, else ``HINDEX_JOBS``, else CPU count."""
    if jobs is None or jobs == "auto":
        env = os.environ.get("HINDEX_JOBS")
        jobs = int(env) if env else (os.cpu_count() or 1)
    jobs = int(jobs)
    if jobs < 1:
        raise DomainError("worker count must be at least 1")
    return jobs


def replication_rng(master_seed: int, n: int, r: int) -> np.random.Generator:
    seq = np.random.SeedSequence(int(master_seed) % 2**64, spawn_key=(int(n), int(r)))
    return np.random.Generator(np.random.PCG64(seq))


def draw_replications(dist: IntegerDistribution, n: int, start: int, stop: int, master_seed: int):
    """Samples for replications ``start..stop-1`` as an int64 ``(reps, n)`` array."""
    out = np.empty((stop - start, n), dtype=np.int64)
    for row, r in enumerate(range(start, stop)):
        try:
            out[row] = dist.sample(replication_rng(master_seed, n, r), n)
        except MemoryError as exc:
            raise SimulationError("out of memory while sampling", n, r) from exc
    return out


@dataclass(frozen=True)
class CellResult:
    """Per-replication outputs for one ``(law, n)`` cell."""

    h_hat: np.ndarray
    v_hat: np.ndarray
    ci_lo: np.ndarray
    ci_hi: np.ndarray

    def covers(self, h: int) -> np.ndarray:
        return (self.ci_lo <= h) & (h <= self.ci_hi)


def simulate_cell(dist, n, replications, level=0.95, master_seed=0, jobs=None, backend=None) -> CellResult:
    n, replications = int(n), int(replications)
    if n < 1 or replications < 1:
        raise DomainError("n and the number of replications must be positive")
    if not 0.0 < level < 1.0:
        raise DomainError(f"confidence level {level!r} outside (0, 1)")
    z = normal_quantile(0.5 + level / 2.0)
    bounds = [(s, min(s + CHUNK, replications)) for s in range(0, replications, CHUNK)]

    def work(span):
        start, stop = span
        samples = draw_replications(dist, n, start, stop, master_seed)
        try:
            return batch_statistics(samples, z, backend)
        except MemoryError as exc:
            raise SimulationError("out of memory in batch statistics", n, start) from exc

    jobs = resolve_jobs(jobs)
    if jobs == 1 or len(bounds) == 1:
        parts = [work(b) for b in bounds]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(work, bounds))
    return CellResult(*(np.concatenate([p[i] for p in parts]) for i in range(4)))


def coverage_check(dist, n, replications, level=0.95, seed=0, jobs=None) -> float:
    """Fraction of replications whose confidence set contains ``h_n``."""
    h = theoretical_h(dist, n)
    cell = simulate_cell(dist, n, replications, level, seed, jobs)
    return float(np.mean(cell.covers(h)))


@dataclass(frozen=True)
class StudyConfig:
    distribution: IntegerDistribution
    n_list: tuple = STUDY_SAMPLE_SIZES
    replications: int = 10_000
    confidence_level: float = 0.95
    master_seed: int = 0
    jobs: int | None = None

    def __post_init__(self):
        if self.replications < 1:
            raise DomainError("replications must be at least 1")
        if not self.n_list or any(int(n) < 1 for n in self.n_list):
            raise DomainError("n_list must be nonempty with every n >= 1")
        if not 0.0 < self.confidence_level < 1.0:
            raise DomainError("confidence level must lie in (0, 1)")
        object.__setattr__(self, "n_list", tuple(int(n) for n in self.n_list))


@dataclass(frozen=True)
class StudyRow:
    law: str
    params: dict = field(compare=False)
    n: int
    replications: int
    h_n: int
    exact_mean_h: float
    exact_var_h: float
    asymp_var: float
    asymp_var_general: float
    mc_mean_h: float
    mc_mean_h_se: float
    mc_var_h: float
    mc_var_h_se: float
    mc_mean_vhat: float
    mc_mean_vhat_se: float
    coverage: float
    coverage_se: float
    degenerate: bool = False

    # columns carrying a Monte Carlo standard error in "<name>_se"
    MC_COLUMNS = ("mc_mean_h", "mc_var_h", "mc_mean_vhat", "coverage")

    def as_dict(self) -> dict:
        return asdict(self)


def _mean_se(x):
    if x.size < 2:
        return float(np.mean(x)), 0.0
    return float(np.mean(x)), float(np.std(x, ddof=1) / math.sqrt(x.size))


def _var_se(x):
    b = x.size
    if b < 2:
        return 0.0, 0.0
    s2 = float(np.var(x, ddof=1))
    if b < 4:
        return s2, 0.0
    m4 = float(np.mean((x - np.mean(x)) ** 4))
    # large-sample SE of the unbiased sample variance
    return s2, math.sqrt(max(0.0, (m4 - s2 * s2 * (b - 3) / (b - 1)) / b))


def summarize_cell(dist, n, cell: CellResult) -> StudyRow:
    h_n = theoretical_h(dist, n)
    b = cell.h_hat.size
    hh = cell.h_hat.astype(float)
    mean_h, mean_h_se = _mean_se(hh)
    var_h, var_h_se = _var_se(hh)
    mean_v, mean_v_se = _mean_se(cell.v_hat)
    cov = float(np.mean(cell.covers(h_n)))
    cov_se = math.sqrt(cov * (1.0 - cov) / b)
    closed = dist.closed_form_asymptotic_variance(h_n, n) if h_n > 0 else None
    general = asymptotic_variance(dist, n) if h_n > 0 else 0.0
    return StudyRow(
        law=dist.label,
        params=dict(dist.params),
        n=int(n),
        replications=b,
        h_n=h_n,
        exact_mean_h=exact_mean(dist, n),
        exact_var_h=exact_variance(dist, n),
        asymp_var=general if closed is None else closed,
        asymp_var_general=general,
        mc_mean_h=mean_h,
        mc_mean_h_se=mean_h_se,
        mc_var_h=var_h,
        mc_var_h_se=var_h_se,
        mc_mean_vhat=mean_v,
        mc_mean_vhat_se=mean_v_se,
        coverage=cov,
        coverage_se=cov_se,
        degenerate=b < 2,
    )


def run_study(config: StudyConfig, backend=None) -> list[StudyRow]:
    """One :class:`StudyRow` per sample size in ``config.n_list``."""
    rows = []
    dist = config.distribution
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        for n in config.n_list:
            cell = simulate_cell(
                dist,
                n,
                config.replications,
                config.confidence_level,
                config.master_seed,
                config.jobs,
                backend,
            )
            rows.append(summarize_cell(dist, n, cell))
    return rows
