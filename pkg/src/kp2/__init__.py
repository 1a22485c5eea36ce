"""Exact localization engine for local P2 stable-quotient invariants."""

from .scalars import ConsistencyError, CycScalar

__version__ = "0.1.0"

__all__ = ["ConsistencyError", "CycScalar", "__version__"]
