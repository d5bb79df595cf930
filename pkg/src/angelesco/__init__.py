"""High-precision laboratory for Angelesco systems of multiple orthogonal
polynomials: spectral curves, equilibrium measures, Szego functions, and
strong-asymptotic predictions checked against a moment-based oracle."""

from .precision import PrecisionCtx, DEFAULT_CTX

__all__ = ["PrecisionCtx", "DEFAULT_CTX"]
__version__ = "0.1.0"
