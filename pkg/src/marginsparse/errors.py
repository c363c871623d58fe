"""Exception types shared across the package."""


class DataError(ValueError):
    """Raised for malformed, inconsistent, or unusable input data."""


class NumericalError(RuntimeError):
    """Raised when a numerical routine fails in a way that signals a bug
    or an input outside the algorithm's validity regime."""
