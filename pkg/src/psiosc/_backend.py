"""Kernel backend selection.

Hot loops ship in two flavours: a numba ``@njit`` version and a vectorised
numpy version. ``PSIOSC_BACKEND`` picks one at import time (``numba`` or
``numpy``); if numba cannot be imported the numpy path is used silently.
``PSIOSC_THREADS`` sets the default degree-of-parallelism hint.
"""

import os

BACKEND_ENV = "PSIOSC_BACKEND"
THREADS_ENV = "PSIOSC_THREADS"

try:
    import numba  # noqa: F401
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda fn: fn


def _pick_backend():
    want = os.environ.get(BACKEND_ENV, "numba").strip().lower()
    if want not in ("numba", "numpy"):
        raise ValueError(f"{BACKEND_ENV} must be 'numba' or 'numpy', got {want!r}")
    if want == "numba" and not HAVE_NUMBA:
        return "numpy"
    return want


BACKEND = _pick_backend()


def default_threads():
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return 1
    n = int(raw)
    if n < 1:
        raise ValueError(f"{THREADS_ENV} must be >= 1")
    return n


def dispatch(numba_impl, numpy_impl, backend=None):
    """Return the implementation for ``backend`` (default: the active one)."""
    backend = backend or BACKEND
    if backend == "numba" and HAVE_NUMBA:
        return numba_impl
    return numpy_impl
