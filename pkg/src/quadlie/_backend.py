"""Kernel backend selection.

The compiled ``_kernels`` extension is used when importable; otherwise the
pure-Python kernels are used. Setting ``QUADLIE_PURE=1`` forces the
fallback.
"""
import os

from . import _kernels_py

if os.environ.get("QUADLIE_PURE") == "1":
    kernels = _kernels_py
else:
    try:
        from . import _kernels as kernels
    except ImportError:
        kernels = _kernels_py

NAME = "pure" if kernels is _kernels_py else "compiled"

BACKENDS = {"pure": _kernels_py}
if NAME == "compiled":
    BACKENDS["compiled"] = kernels
