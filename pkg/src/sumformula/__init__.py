"""Exact and numeric verification of the sum formula for multiple L-values."""

__version__ = "0.1.0"
