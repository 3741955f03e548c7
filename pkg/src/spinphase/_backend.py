"""Select the kernel implementation at import time.

The compiled ``_kernels`` extension is used when importable; setting the
environment variable ``SPINPHASE_PURE_PYTHON=1`` forces the NumPy fallback.
"""
import os

from . import _kernels_py

if os.environ.get("SPINPHASE_PURE_PYTHON", "").strip() not in ("", "0"):
    kernels = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as kernels  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        kernels = _kernels_py
        BACKEND = "python"

rk4_lab = kernels.rk4_lab
track_branches = kernels.track_branches
