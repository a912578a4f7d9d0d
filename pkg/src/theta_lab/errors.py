"""Exception types raised by theta_lab."""


class ThetaLabError(Exception):
    """Base class for all errors raised by this package."""


class PoleError(ThetaLabError, ValueError):
    """A special function was evaluated at (or too close to) one of its poles."""


class DomainError(ThetaLabError, ValueError):
    """An argument lies outside the domain an evaluator is valid on."""


class ConvergenceError(ThetaLabError, ValueError):
    """A series was requested outside its region of absolute convergence."""


class ReductionFailure(ThetaLabError, RuntimeError):
    """A modular reduction loop exceeded its step budget."""


class ToleranceNotMet(ThetaLabError, RuntimeError):
    """An adaptive routine exhausted its budget before reaching the tolerance.

    Attributes
    ----------
    estimate : float
        Best value obtained before giving up.
    error : float
        Error estimate attached to ``estimate``.
    """

    def __init__(self, message, estimate=float("nan"), error=float("inf")):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class FitDegenerate(ThetaLabError, ValueError):
    """A least-squares fit had a numerically vanishing design column."""


class NonFiniteSample(ThetaLabError, ValueError):
    """A sampled function value was NaN or infinite."""
