"""Exception types shared across the package."""


class MonodromyError(Exception):
    """Base class for all package errors."""


class NumericDomainError(MonodromyError, ValueError):
    """Non-finite input or an argument outside the operation's domain."""


class FormViolationError(MonodromyError, ValueError):
    """A matrix expected in canonical monodromy form is not.

    The residual norm is kept on ``residual``.
    """

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


class GeometryError(MonodromyError, ValueError):
    """Negative widths, overlapping layers or a stack failing its width check."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ConfigError(MonodromyError, ValueError):
    """Malformed stack configuration text or run options."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class GridError(MonodromyError, ValueError):
    """A k-grid that is not strictly increasing, too short or non-positive."""


class PresetIntegrityError(MonodromyError):
    """A preset stack does not reproduce its documented total width."""


class IllConditionedError(MonodromyError, ArithmeticError):
    """The interface-matching system is numerically singular."""

    def __init__(self, message: str, condition: float):
        super().__init__(message)
        self.condition = condition


class CausalityWarning(UserWarning):
    """A non-positive monodromy time was produced."""
