"""Exact computations with atoms of modules over finite-dimensional algebras."""

__version__ = "0.1.0"
