"""Exact-arithmetic folded ribbon knots and links."""

__version__ = "0.1.0"
