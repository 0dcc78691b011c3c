"""Exact tools for strength decompositions of symmetric, alternating and ordinary tensors."""

__version__ = "0.1.0"
