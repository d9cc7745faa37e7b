"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class PreconditionError(ValueError):
    """The dynamical hypothesis an operation relies on does not hold."""


class InfeasibleError(DomainError):
    """No object with the requested properties exists for these parameters."""


class DivergedError(ArithmeticError):
    """An orbit left the representable range before the requested step.

    ``partial`` holds whatever was accumulated up to ``step`` (for the
    cocycle this is the partial matrix product).
    """

    def __init__(self, message, step, partial=None):
        super().__init__(message)
        self.step = step
        self.partial = partial


class SolverError(RuntimeError):
    """A root bracket could not be established."""


class SparseCoverageError(ValueError):
    """An orbit leaves angular gaps too wide to describe a closed curve."""
