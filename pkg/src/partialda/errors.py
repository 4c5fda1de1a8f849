"""Exception types shared across the package."""


class AdaptationError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(AdaptationError, ValueError):
    """An input violates a documented precondition or shape contract."""


class ConfigurationError(AdaptationError, ValueError):
    """A parameter setting is unusable for the given data."""


class ParseError(AdaptationError, ValueError):
    """A data file does not conform to its expected format."""


class NumericalError(AdaptationError, RuntimeError):
    """A linear-algebra step failed or produced non-finite values."""
