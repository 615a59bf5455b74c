"""Exception and warning types shared across the package."""


class RnmlError(Exception):
    """Base class for all package errors."""


class NotPositiveDefinite(RnmlError):
    """A matrix required to be positive definite failed a Cholesky pivot.

    Usually means a degenerate moment matrix; retry with a larger
    regularization parameter.
    """

    def __init__(self, pivot_index: int, message: str | None = None):
        self.pivot_index = pivot_index
        super().__init__(message or f"non-positive pivot at index {pivot_index}")


class NoConvergence(RnmlError):
    """The eigenvalue iteration did not reach its threshold."""

    def __init__(self, iterations: int):
        self.iterations = iterations
        super().__init__(f"eigensolver did not converge after {iterations} sweeps")


class DimensionMismatch(RnmlError):
    """Operands have incompatible shapes."""


class SingularProjection(RnmlError):
    """A feature vector has (numerically) zero length in the inverse-Gram metric."""

    def __init__(self, row: int | None = None, message: str | None = None):
        self.row = row
        if message is None:
            where = f" at row {row}" if row is not None else ""
            message = f"feature vector{where} is annihilated by the inverse-Gram metric"
        super().__init__(message)


class UnknownFamily(RnmlError):
    """Polynomial family name not recognized."""


class LabelNotInClasses(RnmlError):
    """A label does not match either designated class."""

    def __init__(self, row: int, label: float):
        self.row = row
        self.label = label
        super().__init__(f"row {row}: label {label!r} matches neither class")


class NotTwoClasses(RnmlError):
    """Dataset does not carry exactly two distinct labels."""


class CsvParse(RnmlError):
    """Malformed CSV input."""

    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


class ModelParse(RnmlError):
    """Malformed model document."""


class InvalidConfig(RnmlError):
    """Bad command-line / run configuration."""


class EmptyIntervalWarning(UserWarning):
    """No observation fell inside the requested label interval."""
