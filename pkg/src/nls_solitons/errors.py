"""Exception types shared across the package."""


class SolitonError(Exception):
    """Base class for all package errors."""


class ParameterError(SolitonError):
    """Invalid parameter or precondition violation (usage error)."""


class ShapeError(ParameterError):
    """Array shape incompatible with the grid."""


class NumericsError(SolitonError):
    """Non-finite values or other numeric breakdown."""


class ConvergenceError(NumericsError):
    """An iterative solve failed to converge; carries its descent trace."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace if trace is not None else []


class DomainError(SolitonError):
    """Operation applied outside its mathematical domain (e.g. J <= 0)."""
