"""Exception types shared across the package."""


class IrsBeamError(Exception):
    """Base class for all package-specific errors."""


class DegenerateGeometryError(IrsBeamError, ValueError):
    """Two nodes coincide or a link distance collapses to zero."""


class DimensionMismatchError(IrsBeamError, ValueError):
    """Array arguments have inconsistent shapes."""


class NonHermitianError(IrsBeamError, ValueError):
    """A matrix that must be Hermitian is not, beyond tolerance."""


class InitializationFailedError(IrsBeamError, RuntimeError):
    """No feasible starting point found for the alternating optimization."""


class ConfigError(IrsBeamError, ValueError):
    """A sweep/scenario configuration file failed validation."""
