"""Exceptions shared across the solver stack."""


class ValidationError(ValueError):
    """An input violates a documented precondition (CLI exit code 2)."""


class SolverError(RuntimeError):
    """A linear solve or a time step broke down (CLI exit code 3)."""
