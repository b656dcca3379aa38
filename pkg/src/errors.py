"""Exception hierarchy shared by the toolkit and mapped to CLI exit codes."""

from __future__ import annotations


class ValidationError(ValueError):
    """Raised when user input does not match the expected shape."""


class RefusedError(RuntimeError):
    """Raised when a request is well formed but outside what we decide."""
