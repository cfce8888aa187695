"""Exception types raised across the package."""


class CqadcError(Exception):
    """Base class for all package errors."""


class ValidationError(CqadcError, ValueError):
    """An input object violates its type invariants."""


class DomainError(CqadcError, ValueError):
    """A scalar parameter lies outside its admissible range."""


class DimensionError(CqadcError, ValueError):
    """Operand shapes are incompatible or exceed the configured size limit."""


class StructureError(CqadcError):
    """A numerically computed object lacks an expected symmetry."""


class ConvergenceError(CqadcError, RuntimeError):
    """An iterative solver exhausted its budget before reaching tolerance.

    Attributes
    ----------
    best_residual : float
        Smallest optimality residual seen during the run.
    iterations : int
        Number of iterations performed.
    """

    def __init__(self, message: str, best_residual: float, iterations: int):
        super().__init__(message)
        self.best_residual = best_residual
        self.iterations = iterations
