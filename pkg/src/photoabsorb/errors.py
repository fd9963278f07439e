"""Exception types raised by the simulator."""


class PhotoAbsorbError(Exception):
    """Base class for all library errors."""


class DomainError(PhotoAbsorbError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class RangeError(PhotoAbsorbError, ValueError):
    """An approximation is evaluated outside its range of validity."""


class RegimeError(RangeError):
    """A regime-specific formula was called outside its confinement regime."""


class SingularityError(DomainError):
    """A closed-form expression was evaluated at its singular point."""


class IntegrationError(PhotoAbsorbError, RuntimeError):
    """The ODE integrator could not reach the requested tolerance."""


class AccuracyError(PhotoAbsorbError, RuntimeError):
    """A quadrature did not converge; ``estimate`` holds the best value found."""

    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class UnsupportedStateError(PhotoAbsorbError, TypeError):
    """The centre-of-mass state is not supported by the requested oracle."""
