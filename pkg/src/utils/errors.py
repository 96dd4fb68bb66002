class AgcError(Exception):
    """Base class of all errors raised on purpose by this package."""


class DataError(AgcError, ValueError):
    """Input data is malformed, inconsistent or too short."""


class ConfigError(AgcError, ValueError):
    """The configuration is invalid or a required input is missing."""


class NumericError(AgcError, ArithmeticError):
    """A numerical procedure failed (no convergence, no stabilizing start, ...)."""
