"""Kernel backend selection.

The hot inner loops (outcome-space scanning, max-flow) exist twice: a numba
@njit kernel and a numpy fallback.  The env var CMS_BACKEND picks the lane:

    CMS_BACKEND=auto    use numba when importable (default)
    CMS_BACKEND=numba   require numba, fail loudly if missing
    CMS_BACKEND=numpy   force the fallback lane

CMS_THREADS caps component-level parallelism in the dispatcher (default 1).
"""

import os

_requested = os.environ.get("CMS_BACKEND", "auto").strip().lower()
if _requested not in ("auto", "numba", "numpy"):
    raise ValueError(
        f"CMS_BACKEND must be 'auto', 'numba' or 'numpy'; got {_requested!r}"
    )

if _requested == "numpy":
    njit = None
    HAVE_NUMBA = False
else:
    try:
        from numba import njit

        HAVE_NUMBA = True
    except ImportError:
        if _requested == "numba":
            raise
        njit = None
        HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and _requested in ("auto", "numba")
BACKEND = "numba" if USE_NUMBA else "numpy"


def thread_cap() -> int:
    """Maximum number of worker threads the dispatcher may use."""
    raw = os.environ.get("CMS_THREADS", "1")
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"CMS_THREADS must be an integer, got {raw!r}")
    return max(1, value)
