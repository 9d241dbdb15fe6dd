"""Kernel backend selection.

The compiled extension is preferred; the NumPy fallback is behaviorally
identical and used whenever the extension is missing (pure-Python install,
unsupported toolchain).
"""

try:
    from . import _kernels as kernels

    BACKEND = "compiled"
except ImportError:  # pragma: no cover - depends on build environment
    from . import _kernels_py as kernels

    BACKEND = "python"

__all__ = ["kernels", "BACKEND"]
