"""Schur-multiplier semigroups, BMO norms, and Clifford dilations at finite dimension."""

__version__ = "0.1.0"
