"""Numerics for realism-based nonlocality and its suppression under monitoring."""

__version__ = "0.1.0"
