"""Exact graded algebra, Leavitt path algebras and the Brown stabilization."""

__version__ = "0.1.0"
