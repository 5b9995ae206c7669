"""Kernel compilation switch.

Hot loops are written once as plain Python over numpy arrays. When numba
is importable and ``SEQAUG_DISABLE_NUMBA`` is unset (or ``0``), they are
compiled with ``numba.njit``; otherwise the same source runs interpreted.
"""

import os

_flag = os.environ.get("SEQAUG_DISABLE_NUMBA", "").strip().lower()
_disabled = _flag not in ("", "0", "false", "no")

try:
    if _disabled:
        raise ImportError
    import numba

    USE_NUMBA = True
except ImportError:
    numba = None
    USE_NUMBA = False


def jit(func):
    """``numba.njit(cache=True, nogil=True)`` or the identity."""
    if USE_NUMBA:
        return numba.njit(cache=True, nogil=True)(func)
    return func


def backend_name():
    return "numba" if USE_NUMBA else "numpy"
