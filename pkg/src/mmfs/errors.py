"""Exception types shared across the package."""


class MmfsError(Exception):
    """Base class for all package-specific errors."""


class InvalidIntervalError(MmfsError, ValueError):
    """An interval does not fit on the grid it is used with."""


class SignalFormatError(MmfsError, ValueError):
    """A signal file could not be parsed."""

    def __init__(self, message, line=None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class SparseConstructionError(MmfsError, RuntimeError):
    """The stopping-time construction produced a node violating sparseness."""

    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node


class UnsupportedYoungFunctionError(MmfsError, ValueError):
    """The requested Young-function operation is not defined for this input."""


class EvaluatorDomainError(MmfsError, ValueError):
    """A Young-function evaluator returned a non-finite value."""


class DegenerateTrialError(MmfsError, RuntimeError):
    """An inequality trial produced rhs = 0 with lhs > 0."""
