"""
Exception hierarchy for the Evako topology toolkit.

Negative classification results are returned as values (refutations,
reports); the exceptions below signal bad input, exhausted budgets and
theorem-level inconsistencies.
"""
from typing import Any, List, Optional, Sequence


class EvakoError(Exception):
    """Base exception for all toolkit errors."""
    pass


class GraphInputError(EvakoError):
    """Exception raised for malformed graphs, unknown vertices or bad parameters."""
    pass


class PreconditionError(GraphInputError):
    """Exception raised when an operation's precondition does not hold."""
    pass


class MalformedGeometryError(PreconditionError):
    """Exception raised when an intersection event spans no simplex in G1."""

    def __init__(self, message: str, index: Optional[int] = None):
        super().__init__(message)
        self.index = index


class ResourceLimitError(EvakoError):
    """Exception raised when a search exceeds its configured budget."""

    def __init__(self, message: str, explored: int = 0):
        super().__init__(message)
        self.explored = explored


class TheoremViolationError(EvakoError):
    """
    Exception raised when a theorem instance fails to hold.

    This is a diagnostic: it means the input was not actually a sphere pair
    or there is an implementation bug. The offending data is kept on the
    exception so it can be reported.
    """

    def __init__(self, message: str, components: Optional[Sequence[Any]] = None, detail: Any = None):
        super().__init__(message)
        self.components: List[Any] = list(components) if components is not None else []
        self.detail = detail


class CertificateError(EvakoError):
    """Exception raised when a certificate fails to replay."""

    def __init__(self, message: str, step: Optional[str] = None):
        super().__init__(message)
        self.step = step
