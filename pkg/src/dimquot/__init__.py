"""Dimension subgroups, dimension quotients and the quadratic functors around them."""

__version__ = "0.1.0"
