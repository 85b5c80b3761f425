"""Exact Schur/Plancherel sampling distributions and hidden-subgroup toolkit."""

__version__ = "0.1.0"
