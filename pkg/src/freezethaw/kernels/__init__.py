"""Hot numeric kernels with two interchangeable backends.

The ``numba`` backend compiles explicit loops with ``@njit``; the ``numpy``
backend is a vectorized pure-numpy path with identical signatures.  The
backend is chosen once at import time from the ``FREEZETHAW_BACKEND``
environment variable (``numba`` or ``numpy``).  When the variable is unset,
numba is used if it can be imported.

Both modules stay importable side by side so tests and the benchmark can
compare them directly.
"""
import os

from . import _numpy

__all__ = [
    "BACKEND",
    "bessel_jn",
    "phase_sum",
    "rk4_chain",
    "tql_implicit",
    "window_stats",
    "load_backend",
]


def load_backend(name):
    """Return the kernel module for ``name`` ("numba" or "numpy")."""
    if name == "numpy":
        return _numpy
    if name == "numba":
        from . import _numba

        return _numba
    raise ValueError(f"unknown kernel backend {name!r}; expected 'numba' or 'numpy'")


def _select():
    requested = os.environ.get("FREEZETHAW_BACKEND", "").strip().lower()
    if requested:
        return requested, load_backend(requested)
    try:
        return "numba", load_backend("numba")
    except ImportError:
        return "numpy", _numpy


BACKEND, _impl = _select()

bessel_jn = _impl.bessel_jn
phase_sum = _impl.phase_sum
rk4_chain = _impl.rk4_chain
tql_implicit = _impl.tql_implicit
window_stats = _impl.window_stats
