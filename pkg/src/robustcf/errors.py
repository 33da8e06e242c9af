"""Exception types shared across the package."""


class TrackerError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(TrackerError, ValueError):
    """An argument violates a documented precondition."""


class NumericError(TrackerError, ArithmeticError):
    """A numeric consistency check failed (symmetry, residue, finiteness)."""


class SingularityError(NumericError):
    """A frequency bin of the regularized kernel spectrum vanished."""


class DivergenceError(NumericError):
    """The alternating solver produced a non-finite objective value."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = list(trace) if trace is not None else []


class IngestionError(TrackerError):
    """A sequence directory or ground-truth file could not be parsed."""


class SequenceError(TrackerError):
    """A frame of a sequence could not be read or processed."""


class UndefinedSensitivityError(InvalidInputError):
    """Peak-value sensitivity is undefined for the given series."""
