"""Exception hierarchy shared by every figmod module."""


class FigmodError(Exception):
    pass


class DegreeMismatch(FigmodError):
    pass


class TruncationTooSmall(FigmodError):
    pass


class TruncationInsufficient(FigmodError):
    """Raised when truncated data cannot support a requested answer."""


class DegreeExceedsTruncation(FigmodError):
    pass


class InvalidRepresentation(FigmodError):
    pass


class IncompatibleModules(FigmodError):
    pass


class ValidationError(FigmodError, ValueError):
    pass


class ParseError(FigmodError):
    def __init__(self, message, line=None, field=None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)


class NoStabilization(FigmodError):
    pass


class SizeLimitExceeded(FigmodError):
    """A computation would exceed the configured size budget."""
