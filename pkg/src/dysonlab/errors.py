"""Exception types shared across the package."""


class BudgetExceededError(RuntimeError):
    """An exact enumeration or window was requested beyond the configured budget."""


class RegimeError(ValueError):
    """Parameters fall outside the regime an operation is defined for."""


class ConvergenceError(RuntimeError):
    """An iterative routine (power iteration, MC chain) failed its convergence check."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual
