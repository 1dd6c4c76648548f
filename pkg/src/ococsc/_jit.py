"""Selects between numba-compiled kernels and the plain numpy fallback.

Set ``OCOCSC_DISABLE_JIT=1`` to run every kernel as ordinary Python/numpy.
The flag is read once, at import time.
"""

import os

_flag = os.environ.get("OCOCSC_DISABLE_JIT", "").strip().lower()

USE_NUMBA = _flag in ("", "0", "false", "no")

if USE_NUMBA:
    try:
        import numba
    except ImportError:  # pragma: no cover - numba is a declared dependency
        USE_NUMBA = False


def jit(fn):
    """Compile ``fn`` with ``numba.njit`` when enabled, else return it unchanged."""
    if USE_NUMBA:
        return numba.njit(cache=True)(fn)
    return fn
