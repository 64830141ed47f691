"""Exception types shared by every module of the package."""

from __future__ import annotations


class LescheError(ValueError):
    """Base class; subclasses ValueError so plain ``except ValueError`` still works."""


class DomainError(LescheError):
    """Input lies outside the set a function is defined on (e.g. all-zero weights)."""


class ParameterError(LescheError):
    """A scalar parameter (q, kappa, alpha, N, epsilon, ...) is out of range."""


class ShapeError(LescheError):
    """Vectors that must have equal length do not."""


class UnsupportedRegimeError(LescheError):
    """No stability certificate is proved for the requested (functional, q, alpha)."""

    def __init__(self, message: str, *, family: str | None = None):
        super().__init__(message)
        self.family = family
