"""Exact lattice computations for cubic fourfolds containing a Veronese surface."""

__version__ = "0.1.0"
