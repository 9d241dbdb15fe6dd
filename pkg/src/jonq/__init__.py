"""Lyapunov exponents, quantized acceleration, linearization and exact
degree growth for a family of fibered birational maps and the 2x2
quasiperiodic cocycles they generate."""

__version__ = "0.1.0"

from .backend import BACKEND

__all__ = ["BACKEND", "__version__"]
