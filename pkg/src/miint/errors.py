"""Exceptions shared across the package."""


class PrecisionError(RuntimeError):
    """A computed error estimate exceeds the requested tolerance."""


class ConvergenceError(ValueError):
    """A series was requested outside its absolute-convergence range."""
