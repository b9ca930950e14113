"""Exact-arithmetic certificates for linear and matrix min-max theorems."""

__version__ = "0.1.0"
