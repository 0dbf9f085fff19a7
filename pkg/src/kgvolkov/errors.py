"""Exception types shared across the package."""


class QuadratureError(RuntimeError):
    """An adaptive quadrature could not meet the requested tolerance."""


class ExtrapolationError(RuntimeError):
    """Regulator extrapolation of an oscillatory integral did not converge."""

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class DiscontinuityError(ValueError):
    """A finite-difference stencil would straddle a pulse discontinuity."""


class ConfigError(ValueError):
    """A run-configuration value is missing or invalid."""
