"""Exact computation in the Nottingham group over F_p and its index subgroups."""

__version__ = "0.1.0"
