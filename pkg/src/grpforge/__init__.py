"""Finite-group constructions with prescribed automorphism behaviour."""

__version__ = "0.1.0"
