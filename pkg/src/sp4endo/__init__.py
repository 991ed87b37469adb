"""Exact and numerical tools for endoscopy on Sp(4, R)."""

__version__ = "0.1.0"
