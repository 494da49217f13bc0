"""Exact Weingarten calculus on the unitary group via complex reflections."""

__version__ = "0.1.0"
