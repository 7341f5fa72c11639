"""Exception hierarchy shared by every module."""


class LinecodeError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(LinecodeError, ValueError):
    """A caller-supplied parameter violates a precondition."""


class FieldMismatchError(LinecodeError, TypeError):
    """Operands belong to different prime fields."""


class FieldDivisionError(LinecodeError, ZeroDivisionError):
    """Inversion of the zero element."""


class ShapeError(LinecodeError, ValueError):
    """Matrix or vector dimensions do not agree."""


class SingularMatrixError(LinecodeError, ArithmeticError):
    def __init__(self, rank: int, size: int):
        super().__init__(f"matrix is singular (rank {rank} < {size})")
        self.rank = rank
        self.size = size


class NoIntersectionError(LinecodeError, ValueError):
    """Two lines are parallel or equal."""


class GenerationError(LinecodeError, RuntimeError):
    """Random construction exhausted its attempt budget."""


class TooLargeError(LinecodeError, ValueError):
    """An exhaustive enumeration would exceed its guard."""


class UnsupportedError(LinecodeError, ValueError):
    """Operation not available for this kind of object."""


class InconsistencyError(LinecodeError, RuntimeError):
    """An internal invariant failed; the input data is corrupt."""
