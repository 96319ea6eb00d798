"""Exact computations with twisted Heisenberg superalgebras and their gradings."""

__version__ = "0.1.0"
