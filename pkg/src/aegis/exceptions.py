"""Exception types shared across the package."""


class AegisError(Exception):
    """Base class for package errors."""


class DomainError(AegisError, ValueError):
    """A value lies outside its declared domain (bounds, unit cube, ...)."""


class StateError(AegisError, RuntimeError):
    """An object is used before it reached the required state."""


class ConfigurationError(AegisError, ValueError):
    """An invalid or contradictory configuration was supplied."""


class NumericalError(AegisError, ArithmeticError):
    """A numerical routine failed beyond recovery (e.g. Cholesky after
    jitter escalation, non-finite objective values)."""
