"""Kernel backend selection.

MINKDENSITY_BACKEND=numba (default) uses the JIT kernels;
MINKDENSITY_BACKEND=numpy forces the pure-numpy twin.  When numba is not
importable the numpy path is used silently.  Both modules expose the same
functions over the same packed-array layout.
"""

import os

ENV_VAR = "MINKDENSITY_BACKEND"


def _select():
    choice = os.environ.get(ENV_VAR, "numba").strip().lower()
    if choice not in ("numba", "numpy"):
        raise ValueError(
            f"{ENV_VAR} must be 'numba' or 'numpy', got {choice!r}"
        )
    if choice == "numba":
        try:
            from . import _kernels_numba as mod
        except ImportError:
            from . import _kernels_numpy as mod
    else:
        from . import _kernels_numpy as mod
    return mod


kernels = _select()


def active_backend() -> str:
    """Name of the kernel backend selected at import time."""
    return kernels.BACKEND_NAME
