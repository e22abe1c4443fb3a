"""Optional numba acceleration.

Kernels are written in the numba-compatible subset of Python so the same
source runs compiled or interpreted.  Set ``HIRSCHSTAT_DISABLE_NUMBA=1``
(or numba's own ``NUMBA_DISABLE_JIT=1``) to force the pure-numpy path; the
batch entry points then dispatch to vectorized numpy implementations
instead of the compiled loops.
"""

import os

_TRUTHY = {"1", "true", "yes", "on"}


def _flag(name):
    return os.environ.get(name, "").strip().lower() in _TRUTHY


try:
    import numba
except ImportError:  # pragma: no cover - numba is an optional speedup
    numba = None

USE_NUMBA = (
    numba is not None
    and not _flag("HIRSCHSTAT_DISABLE_NUMBA")
    and not _flag("NUMBA_DISABLE_JIT")
)


def njit(*args, **kwargs):
    """``numba.njit`` with project defaults, or the identity when disabled."""
    options = dict(cache=True, nogil=True, error_model="numpy")
    options.update(kwargs)

    if not USE_NUMBA:
        if len(args) == 1 and callable(args[0]):
            return args[0]
        return lambda func: func

    if len(args) == 1 and callable(args[0]):
        return numba.njit(**options)(args[0])
    return numba.njit(*args, **options)


def backend():
    return "numba" if USE_NUMBA else "numpy"
