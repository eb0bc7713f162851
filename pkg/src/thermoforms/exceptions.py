"""Exception types shared across the package."""


class ThermoformsError(Exception):
    """Base class for all library-specific errors."""


class DomainError(ThermoformsError, ValueError):
    """A point lies outside the validity domain of a model or function."""


class NonPositiveTemperatureError(DomainError):
    """The entropy gradient gives a non-positive temperature at this point."""


class SingularSigma2Error(ThermoformsError, ArithmeticError):
    """The second-moment form is degenerate, so the fourth-moment form has a pole."""


class DimensionMismatchError(ThermoformsError, ValueError):
    """Moment tensors passed together do not live over the same space."""


class AllZeroCubicError(ThermoformsError, ValueError):
    """Every cubic coefficient is numerically zero; there is nothing to solve."""


class QuadratureError(ThermoformsError, RuntimeError):
    """Numerical quadrature could not reach the requested tolerance."""
