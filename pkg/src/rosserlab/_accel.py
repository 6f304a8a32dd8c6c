"""Numba availability and the switch between jitted and pure-numpy kernels.

Set ``ROSSERLAB_DISABLE_NUMBA=1`` to force the numpy fallback (useful for
debugging and for the benchmark's baseline). The flag is read once at import.
"""

from __future__ import annotations

import os

DISABLE_ENV = "ROSSERLAB_DISABLE_NUMBA"

try:
    import numba as _numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    _numba = None

HAVE_NUMBA = _numba is not None
USE_NUMBA = HAVE_NUMBA and os.environ.get(DISABLE_ENV, "").lower() not in ("1", "true", "yes", "on")


def njit(fn):
    """``numba.njit(cache=True)`` when numba is importable, identity otherwise."""
    if _numba is None:
        return fn
    return _numba.njit(cache=True)(fn)
