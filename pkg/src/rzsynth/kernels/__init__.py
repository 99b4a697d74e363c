"""Hot integer/float loops behind a switch: numba when available, numpy otherwise.

Set ``RZSYNTH_NO_NUMBA=1`` to force the pure-numpy path.  Both paths return
identical arrays (same values, same order).
"""

import os

import numpy as np

from . import _numpy

_disabled = os.environ.get("RZSYNTH_NO_NUMBA", "").strip().lower() not in ("", "0", "false", "no")

if _disabled:
    _numba = None
else:
    try:
        from . import _numba
    except ImportError:  # numba missing or broken
        _numba = None

BACKEND = "numpy" if _numba is None else "numba"
_impl = _numpy if _numba is None else _numba


def _rows(a):
    return np.ascontiguousarray(a, dtype=np.int64).reshape(-1, 10)


def canonicalize(rows):
    return _impl.canonicalize(_rows(rows))


def product_canon(left, right):
    return _impl.product_canon(_rows(left), _rows(right))


def distance_sq(rows, cos_t, sin_t):
    return _impl.distance_sq(
        _rows(rows), np.asarray(cos_t, dtype=np.float64), np.asarray(sin_t, dtype=np.float64)
    )


def halves_scan(target, m, tol):
    return _impl.halves_scan(float(target), int(m), float(tol))


def backends():
    """Available kernel modules by name (for benchmarks and cross-checks)."""
    out = {"numpy": _numpy}
    if _numba is not None:
        out["numba"] = _numba
    return out
