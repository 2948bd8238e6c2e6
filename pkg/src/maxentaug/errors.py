"""Exception types shared across the package."""


class MaxentAugError(Exception):
    """Base class for all errors raised by this package."""


class InvalidParameterError(MaxentAugError, ValueError):
    """A sampling or transform parameter violates its precondition."""


class NumericDomainError(MaxentAugError, ValueError):
    """Image data left the numeric domain (NaN / non-finite values)."""


class ConfigError(MaxentAugError, ValueError):
    """Invalid pipeline configuration.

    ``key`` names the offending config field when known.
    """

    def __init__(self, message, key=None):
        super().__init__(message)
        self.key = key


class ManifestError(MaxentAugError, ValueError):
    """Invalid dataset manifest. ``line`` is the 1-based line number."""

    def __init__(self, message, line=None):
        super().__init__(message)
        self.line = line
