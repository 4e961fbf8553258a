"""Exception types shared across the package."""


class HCError(Exception):
    """Base class for all errors raised by hcseries."""


class DatumError(HCError, ValueError):
    """Invalid or unsupported root system datum or multiplicity function."""


class SingularPointError(HCError, ArithmeticError):
    """A denominator fell below the pole-proximity guard."""

    def __init__(self, message, where=None, value=None):
        super().__init__(message)
        self.where = where
        self.value = value


class ResonanceError(SingularPointError):
    """Small denominator in the coefficient recurrence at some height."""

    def __init__(self, message, height=None, alpha=None, value=None):
        super().__init__(message, where=alpha, value=value)
        self.height = height
        self.alpha = alpha


class ConvergenceError(HCError, ArithmeticError):
    """A series was evaluated outside its domain of convergence."""


class ConfigError(HCError, ValueError):
    """Malformed run configuration."""
