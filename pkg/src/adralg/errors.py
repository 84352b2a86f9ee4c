"""Exception types shared across the package."""


class AdralgError(Exception):
    """Base class for every error raised by this package."""


class ParseError(AdralgError, SyntaxError):
    """Malformed input text; carries the 1-based line and column."""

    def __init__(self, message: str, line: int = 0, column: int = 0, source: str = "<input>"):
        self.line = line
        self.column = column
        self.source = source
        super().__init__(f"{source}:{line}:{column}: {message}")


class NonParallelRelation(AdralgError):
    pass


class RelationTooShort(AdralgError):
    pass


class NotAdmissibleWithinCap(AdralgError):
    pass


class NotASubmodule(AdralgError):
    pass


class NotLocal(AdralgError):
    pass


class NotInAdd(AdralgError):
    """Raised by ``decompose_into``; ``remainder`` is the summand left over."""

    def __init__(self, message: str, found=None, remainder=None):
        super().__init__(message)
        self.found = found or []
        self.remainder = remainder


class EmptyInput(AdralgError):
    pass


class NonTerminatingLayer(AdralgError):
    pass


class NonSplitEndomorphism(AdralgError):
    pass


class CapExceeded(AdralgError):
    pass


class SearchBoundExceeded(AdralgError):
    pass


class LoewyLengthOne(AdralgError):
    pass


class EquivalenceViolation(AdralgError):
    pass
