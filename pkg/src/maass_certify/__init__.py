"""Toolkit for quasi-Maass forms, annihilating operators and the
approximate-converse certification bounds on GL(2) and GL(3)."""

__version__ = "0.1.0"
