"""Exception types shared across the package."""


class EsnfbError(Exception):
    """Base class for all package errors."""


class ShapeError(EsnfbError, ValueError):
    """Operands have incompatible dimensions."""


class InvalidParameterError(EsnfbError, ValueError):
    """A parameter violates its documented range."""


class DegenerateMatrixError(EsnfbError, ValueError):
    """A matrix lacks the structure an operation requires (e.g. zero spectral radius)."""


class NumericalError(EsnfbError, ArithmeticError):
    """A computation produced a non-finite or non-convergent result.

    `step` carries the simulation step index when the failure occurred inside
    a closed-loop episode, else None.
    """

    def __init__(self, message: str, step: int | None = None):
        super().__init__(message if step is None else f"{message} (step {step})")
        self.step = step
