"""Exception types shared across the package."""


class EffcondError(Exception):
    """Base class for computation failures raised by effcond."""


class ConvergenceError(EffcondError):
    """A summation or iteration did not reach the requested accuracy.

    ``best`` holds the last estimate and ``accuracy`` the achieved error
    (or defect) so callers can still inspect what was obtained.
    """

    def __init__(self, message, best=None, accuracy=None):
        super().__init__(message)
        self.best = best
        self.accuracy = accuracy


class SingularSystemError(EffcondError):
    def __init__(self, message, rho=None, f=None, order=None):
        super().__init__(message)
        self.rho = rho
        self.f = f
        self.order = order


class DomainError(EffcondError, ValueError):
    """Input lies outside the validity domain of a formula or geometry."""


class PoleError(EffcondError, ArithmeticError):
    """A closed-form expression hit a vanishing denominator."""
