"""Numba switch.

The compiled kernels are used when numba imports cleanly and the
environment variable ``SYMBATH_NUMBA`` is not set to a false value
(``0``, ``false``, ``no``, ``off``).  Otherwise every kernel runs its
pure-numpy path.  The flag is read once, at import time.
"""

import os

_FALSE = {"0", "false", "no", "off"}

try:
    import numba
except ImportError:  # pragma: no cover - numba ships with the dev env
    numba = None

HAVE_NUMBA = numba is not None
USE_NUMBA = HAVE_NUMBA and os.environ.get("SYMBATH_NUMBA", "1").strip().lower() not in _FALSE


def njit(fn):
    """Compile ``fn`` with numba when available, else hand it back untouched.

    Compilation happens regardless of ``USE_NUMBA`` so the benchmark can
    compare both paths in one process; dispatch code decides which is called.
    """
    if not HAVE_NUMBA:
        return fn
    return numba.njit(cache=True, nogil=True)(fn)
