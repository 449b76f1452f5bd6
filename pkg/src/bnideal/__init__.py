"""Conditional-independence ideals of Bayesian networks."""

__version__ = "0.1.0"
