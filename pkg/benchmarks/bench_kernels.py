"""Compare the compiled and pure-numpy kernels.

Each backend runs in its own interpreter (the numpy path is selected with
HIRSCHSTAT_DISABLE_NUMBA=1 before import), so compilation caches and
dispatch do not leak between runs.

    python benchmarks/bench_kernels.py [--repeat 5]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import timeit

CASES = ("batch_statistics", "binomial_tail_array", "stable_table", "simulate_cell")


def _measure(repeat: int) -> dict:
    import numpy as np

    import hirschstat
    from hirschstat import DiscreteStable, DiscretizedWeibull, normal_quantile
    from hirschstat.distributions import _TABLES
    from hirschstat.kernels import batch_statistics
    from hirschstat.montecarlo import simulate_cell
    from hirschstat.special import binomial_tail_array

    rng = np.random.default_rng(0)
    samples = DiscretizedWeibull(0.1).sample(rng, (4096, 100))
    z = normal_quantile(0.975)
    n_tail = 5000
    p = rng.random(20_000)
    j = rng.integers(0, n_tail + 1, size=20_000)

    def stable():
        _TABLES.clear()
        DiscreteStable(0.3, 1.2).survival_array(np.array([5000]))

    jobs = {
        "batch_statistics": lambda: batch_statistics(samples, z),
        "binomial_tail_array": lambda: binomial_tail_array(n_tail, p, j),
        "stable_table": stable,
        "simulate_cell": lambda: simulate_cell(DiscreteStable(0.5, 1.5, shift=1), 100, 2048, master_seed=1, jobs=1),
    }
    out = {"backend": hirschstat.backend()}
    for name in CASES:
        jobs[name]()  # warm-up (compilation, table caches)
        out[name] = min(timeit.repeat(jobs[name], number=1, repeat=repeat))
    return out


def _run_child(disable: bool, repeat: int) -> dict:
    env = dict(os.environ)
    env.pop("HIRSCHSTAT_DISABLE_NUMBA", None)
    if disable:
        env["HIRSCHSTAT_DISABLE_NUMBA"] = "1"
    cmd = [sys.executable, __file__, "--child", "--repeat", str(repeat)]
    res = subprocess.run(cmd, env=env, capture_output=True, text=True, check=True)
    return json.loads(res.stdout)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--child", action="store_true", help=argparse.SUPPRESS)
    args = parser.parse_args()
    if args.child:
        print(json.dumps(_measure(args.repeat)))
        return

    fast = _run_child(False, args.repeat)
    slow = _run_child(True, args.repeat)
    print(f"{'kernel':<22}{fast['backend'] + ' (s)':>14}{slow['backend'] + ' (s)':>14}{'speedup':>10}")
    for name in CASES:
        print(f"{name:<22}{fast[name]:>14.4f}{slow[name]:>14.4f}{slow[name] / fast[name]:>9.1f}x")


if __name__ == "__main__":
    main()
