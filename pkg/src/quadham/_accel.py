# Backend selection for the hot kernels.
#
# QUADHAM_BACKEND=numpy forces the vectorised numpy path even when numba is
# importable; QUADHAM_BACKEND=numba (the default) uses numba when present.

import logging
import os

logger = logging.getLogger(__name__)

try:
    import numba

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAS_NUMBA = False


def _requested_backend():
    value = os.environ.get("QUADHAM_BACKEND", "numba").strip().lower()
    if value not in ("numba", "numpy"):
        logger.warning("unknown QUADHAM_BACKEND=%r, using numba", value)
        value = "numba"
    return value


BACKEND = "numba" if (HAS_NUMBA and _requested_backend() == "numba") else "numpy"


def njit(pyfunc=None, **kwargs):
    """``numba.njit`` when numba is importable, identity decorator otherwise."""
    if HAS_NUMBA:
        kwargs.setdefault("cache", True)
        return numba.njit(**kwargs)(pyfunc) if pyfunc is not None else numba.njit(**kwargs)

    def wrap(func):
        return func

    return wrap if pyfunc is None else wrap(pyfunc)
