"""Exact tools for fractional precoloring extension on Kneser-type graphs."""

__version__ = "0.1.0"
