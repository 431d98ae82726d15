"""Kernel backend selection.

The compiled Cython kernels are used when importable. Set
``CITEPATHS_PURE_PYTHON=1`` to force the numpy fallback.
"""
import os

from . import _fallback

try:
    if os.environ.get("CITEPATHS_PURE_PYTHON"):
        raise ImportError("pure-python backend requested")
    from . import _kernels as kernels
    name = "cython"
except ImportError:
    kernels = _fallback
    name = "numpy"

fallback = _fallback
