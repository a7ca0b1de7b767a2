"""Error types raised by the pipeline. Every error carries a source span."""

from __future__ import annotations

from minisolv.source import Span


class VerifierError(Exception):
    """Base class for all source-level errors."""

    def __init__(self, message: str, span: Span | None = None):
        self.message = message
        self.span = span
        super().__init__(str(self))

    def __str__(self) -> str:
        if self.span is not None:
            return f"{self.span}: {self.message}"
        return self.message


class LexError(VerifierError):
    pass


class ParseError(VerifierError):
    def __init__(self, message: str, span: Span | None = None, expected: tuple[str, ...] = ()):
        self.expected = expected
        if expected:
            message = f"{message} (expected one of: {', '.join(expected)})"
        super().__init__(message, span)


class UnsupportedFeature(VerifierError):
    def __init__(self, construct: str, span: Span | None = None):
        self.construct = construct
        super().__init__(f"unsupported construct: {construct}", span)


class AnnotationError(VerifierError):
    pass


class ScopeError(VerifierError):
    pass


class NameResolutionError(VerifierError):
    pass


class TypeCheckError(VerifierError):
    pass


class SumError(VerifierError):
    pass


class TranslationError(VerifierError):
    pass


class UnsupportedOperation(VerifierError):
    pass


class CallRecursionError(VerifierError):
    pass


class DomainTooLarge(Exception):
    """Raised by the concrete interpreter when the enumeration budget is exhausted."""
