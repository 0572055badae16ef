"""numba switch.

Set ``ARRKPI_NO_JIT=1`` to force the pure-numpy kernels.  Both variants of
every kernel stay importable so they can be compared side by side.
"""
import os

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    numba = None
    HAVE_NUMBA = False

JIT_DISABLED = os.environ.get("ARRKPI_NO_JIT", "").lower() in ("1", "true", "yes")
USE_JIT = HAVE_NUMBA and not JIT_DISABLED


def njit(fn):
    """``numba.njit(cache=True)`` when numba is importable, else identity."""
    if not HAVE_NUMBA:
        return fn
    return numba.njit(cache=True)(fn)


def backend() -> str:
    return "numba" if USE_JIT else "numpy"
