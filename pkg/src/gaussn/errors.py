"""Semantic exception hierarchy shared across the package."""


class GaussnError(Exception):
    """Base class for all package-specific errors."""


class InputError(GaussnError, ValueError):
    """A caller violated a documented precondition (domain, shape, range)."""


class UnsupportedModelError(InputError):
    """The requested operation is not defined for this model variant."""


class NumericalError(GaussnError, RuntimeError):
    """A numerical procedure failed to meet its contract."""


class QuadratureError(NumericalError):
    """Adaptive integration could not reach the requested tolerance.

    Carries the best estimate obtained so far, so callers can decide whether
    a degraded result is acceptable.
    """

    def __init__(self, message, value=None, error_estimate=None, subdivisions_used=None):
        super().__init__(message)
        self.value = value
        self.error_estimate = error_estimate
        self.subdivisions_used = subdivisions_used
