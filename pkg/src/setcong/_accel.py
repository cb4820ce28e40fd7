"""Numba switch for the hot kernels.

Every kernel in :mod:`setcong.kernels` is written in the numba-compatible
subset of Python/numpy.  When numba is importable and the environment flag
``SETCONG_DISABLE_NUMBA`` is unset (or ``0``), kernels are compiled with
``@njit``; otherwise the identical source runs as plain Python over numpy
arrays.  The flag is read once, at import time.
"""
import os

DISABLED = os.environ.get("SETCONG_DISABLE_NUMBA", "") not in ("", "0")

try:
    if DISABLED:
        raise ImportError("numba disabled by SETCONG_DISABLE_NUMBA")
    import numba

    HAVE_NUMBA = True
except ImportError:
    numba = None
    HAVE_NUMBA = False


def njit(fn):
    if HAVE_NUMBA:
        return numba.njit(cache=True, nogil=True)(fn)
    return fn


def py_func(fn):
    """The uncompiled Python body of a kernel, whichever mode is active."""
    return getattr(fn, "py_func", fn)


def backend() -> str:
    return f"numba {numba.__version__}" if HAVE_NUMBA else "python"
