"""Exception types shared by the workbench modules."""


class WorkbenchError(Exception):
    """Base class for every error raised by this package."""


class SpecParseError(WorkbenchError):
    pass


class SizeLimitExceeded(WorkbenchError):
    pass


class AxiomViolation(WorkbenchError):
    pass


class NotAnIdeal(WorkbenchError):
    pass


class DimensionMismatch(WorkbenchError):
    pass


class RingMismatch(WorkbenchError):
    pass


class BudgetExceeded(WorkbenchError):
    """A search would exceed its operation budget. Never a silent 'no'."""


class WitnessNotFound(WorkbenchError):
    pass


class NotIdempotent(WorkbenchError):
    pass


class ClassPreconditionFailed(WorkbenchError):
    pass


class FgSearchUnsupported(WorkbenchError):
    pass


class HypothesisFailed(WorkbenchError):
    pass


class DecompositionWitnessNotFound(WorkbenchError):
    pass


class _Indexed(WorkbenchError):
    """Carries the position of the first failing index."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class NotAChain(_Indexed):
    pass


class TailInadmissible(WorkbenchError):
    pass


class NotInS(_Indexed):
    pass


class NotIncreasing(_Indexed):
    pass


class SearchExhausted(WorkbenchError):
    pass


class InterpolantNotFound(WorkbenchError):
    pass


class CofinalityFailed(WorkbenchError):
    pass


class NotWeaklySUnital(WorkbenchError):
    pass


class ParseError(WorkbenchError):
    def __init__(self, message, line=0, col=0):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col


class UnknownSuite(WorkbenchError):
    pass


class UnknownConstructor(WorkbenchError):
    pass


class UnsupportedFormat(WorkbenchError):
    pass


class CrossValidationError(WorkbenchError):
    """Two independent procedures disagreed where both were conclusive."""
