"""Exception types raised across the package."""

from __future__ import annotations


class TedGraphError(Exception):
    """Base class for all errors raised by tedgraph."""


class GraphError(TedGraphError, ValueError):
    pass


class IndexOutOfRange(GraphError):
    pass


class SelfLoop(GraphError):
    pass


class LengthMismatch(GraphError):
    pass


class FiltrationError(TedGraphError, ValueError):
    pass


class EmptyUniverse(FiltrationError):
    pass


class NonInjectiveFeatures(FiltrationError):
    pass


class MissingFiltrationValue(FiltrationError, KeyError):
    pass


class DimensionMismatch(FiltrationError):
    pass


class MalformedMatrix(TedGraphError, ValueError):
    pass


class IntegrationError(TedGraphError, ValueError):
    pass


class UnknownToken(IntegrationError, KeyError):
    pass


class SizeBoundExceeded(IntegrationError):
    pass


class EnumerationTooLarge(IntegrationError):
    pass


class TooLarge(TedGraphError, ValueError):
    """Input exceeds the guard of an exponential-time routine."""


class MonotonicityViolation(TedGraphError, AssertionError):
    """A result contradicts a proven expressivity property."""


class ParseError(TedGraphError, ValueError):
    def __init__(self, message: str, line: int | None = None, path: str | None = None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)


class MissingFile(TedGraphError, FileNotFoundError):
    pass


class TUIndexError(ParseError, IndexError):
    pass


class RaggedIndicator(ParseError):
    pass
