"""Exception hierarchy shared by every solver module."""


class TcandError(Exception):
    """Base class for all package errors."""


class ParseError(TcandError):
    """Malformed input document."""

    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class InstanceError(TcandError, ValueError):
    """Semantically invalid instance or parameter (bad round count, unknown name, ...)."""


class AttributeOutOfRange(InstanceError):
    pass


class NotSimpleError(InstanceError):
    pass


class DegreeExceeded(InstanceError):
    pass


class TooLarge(InstanceError):
    """Exhaustive search refused because the instance exceeds the size guard."""


class InfeasibleError(TcandError):
    """No solution exists (targets cannot be derived, blues cannot be covered, LP infeasible)."""


class UncoverableError(InfeasibleError):
    pass


class SolverError(TcandError):
    """Internal numerical failure, e.g. an unbounded LP where none is possible."""
