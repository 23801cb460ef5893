"""Symbolic equivalence and inclusion checking for Kleene algebra with tests."""

__version__ = "0.1.0"
