"""Optional numba acceleration for the hot numeric kernels.

The package runs on plain numpy; when numba is importable the inner loops
(frame propagation, quaternion scans) are jit-compiled instead.  Set the
environment variable ``DDSYNTH_DISABLE_NUMBA=1`` to force the pure-numpy
path, e.g. for debugging or benchmarking (see benchmarks/benchmark_kernels.py).
"""

import os


def _numba_wanted() -> bool:
    if os.environ.get("DDSYNTH_DISABLE_NUMBA", "").strip() not in ("", "0"):
        return False
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


USE_NUMBA = _numba_wanted()

if USE_NUMBA:
    from numba import njit
else:
    def njit(*args, **kwargs):
        """No-op stand-in for numba.njit."""
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]

        def wrap(f):
            return f

        return wrap
