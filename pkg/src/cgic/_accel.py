"""Optional numba acceleration.

Kernels are decorated with :func:`njit`. When numba is importable and the
environment variable ``CGIC_DISABLE_NUMBA`` is unset (or ``0``), they are
compiled; otherwise the decorator returns the plain Python function, which
runs the same numpy code unjitted.
"""

import os

_FLAG = os.environ.get("CGIC_DISABLE_NUMBA", "0").strip().lower()
_DISABLED = _FLAG not in ("", "0", "false", "no")

try:
    if _DISABLED:
        raise ImportError
    import numba as _numba
except ImportError:
    _numba = None

NUMBA_ENABLED = _numba is not None


def njit(fn):
    if _numba is None:
        fn.py_func = fn
        return fn
    return _numba.njit(cache=True)(fn)


def backend():
    return "numba" if NUMBA_ENABLED else "numpy"
