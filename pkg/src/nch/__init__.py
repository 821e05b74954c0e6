"""Exact cyclic homology, index pairings and related desk checks."""

__version__ = "0.1.0"
