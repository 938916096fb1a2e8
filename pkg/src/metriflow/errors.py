"""Exception types shared across the package."""


class MetriflowError(Exception):
    """Base class for all package errors."""


class ThermoDomainError(MetriflowError, ValueError):
    """Equation of state evaluated outside its admissible domain."""


class InadmissibleStateError(MetriflowError, ValueError):
    """A field state violates rho > 0, T > 0, or finiteness."""


class UnsupportedFamilyError(MetriflowError, ValueError):
    """Operation requested for a model family that does not support it."""


class ConfigError(MetriflowError, ValueError):
    """Invalid or unparseable run configuration."""


class IntegrationError(MetriflowError, RuntimeError):
    """Time integration produced an inadmissible or non-finite state."""

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step
