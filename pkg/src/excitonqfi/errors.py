"""Exception types shared across the package."""


class ExcitonQFIError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(ExcitonQFIError, ValueError):
    """Malformed or inconsistent input data (shapes, symmetry, labels)."""


class DomainError(ExcitonQFIError, ValueError):
    """Input is well-formed but outside the mathematical domain of the operation."""


class RejectedDrawError(ExcitonQFIError):
    """A stochastic draw produced an unphysical configuration; the caller resamples."""


class CapabilityError(ExcitonQFIError):
    """Request exceeds a deliberate size/feature guard (e.g. dense-oracle memory)."""


class ConfigurationError(ExcitonQFIError):
    """A run configuration cannot be executed (e.g. pathological disorder)."""


class WindowError(ExcitonQFIError):
    """A time window is too short for the requested transform."""


class IntegrationError(ExcitonQFIError):
    """A spectral integral is untrustworthy (band truncation at the grid edge)."""


class NumericalError(ExcitonQFIError):
    """A numerical routine failed to converge to its stated tolerance."""
