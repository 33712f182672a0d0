"""Exact log canonical thresholds, jumping numbers and asymptotic invariants
of monomial ideals, ideal sequences and toric psh functions."""

__version__ = "0.1.0"
