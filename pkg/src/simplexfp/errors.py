"""Exception hierarchy shared by all simplexfp modules."""


class SimplexError(Exception):
    """Base class for every error raised by this package."""


class MembershipError(SimplexError):
    """A coordinate sequence violates the simplex membership invariants."""


class MapRangeError(SimplexError):
    """A map produced output outside the closed simplex."""


class RangeViolation(MapRangeError):
    """A parsed map without a projection step left the simplex."""


class DivisionByZero(SimplexError):
    """Division by zero while evaluating a map expression."""

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class MapSyntaxError(SimplexError):
    """Syntax error in a map definition, with source position."""

    def __init__(self, line, column, expected, found):
        self.line = line
        self.column = column
        self.expected = tuple(expected)
        self.found = found
        exp = " or ".join(self.expected)
        super().__init__(f"line {line}, column {column}: expected {exp}, found {found!r}")


class UndeclaredVariable(MapSyntaxError):
    """An identifier that is not an x<i> variable or a known function."""

    def __init__(self, line, column, name):
        self.name = name
        super().__init__(line, column, ("variable x<i>",), name)


class EmptyComponentList(SimplexError):
    """A map definition with no component equations."""


class UnknownBuiltin(SimplexError):
    """Requested builtin map name is not registered."""


class ResourceCapExceeded(SimplexError):
    """An enumeration or walk exceeded the configured cell budget."""

    def __init__(self, message, cap):
        super().__init__(message)
        self.cap = cap


class RefinementExhausted(SimplexError):
    """The refinement loop hit its budget before the residual target.

    Carries the best candidate seen so far for diagnostics.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class InternalError(SimplexError):
    """Invariant violation inside the path follower (e.g. mutated labels)."""
