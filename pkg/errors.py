"""
Error Types
All failures are ValueError subclasses so callers can keep catching ValueError
"""


class InvalidArgumentError(ValueError):
    """A precondition on an argument does not hold."""


class ParseError(ValueError):
    """Malformed input text; carries the 1-based line number when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ObjectiveParseError(ParseError):
    pass


class CorpusParseError(ParseError):
    pass


class TopicParseError(ParseError):
    pass


class QrelsParseError(ParseError):
    pass


class RunFileParseError(ParseError):
    pass


class IndexBuildError(ValueError):
    pass


class IndexFormatError(ValueError):
    """An index file failed to load; the message names the failing section."""

    def __init__(self, message, section=None):
        self.section = section
        if section is not None:
            message = f"{section}: {message}"
        super().__init__(message)


class CorpusUnavailableError(ValueError):
    """Positional diagnostics need document texts the caller did not supply."""


class SynthError(ValueError):
    """A synthetic corpus specification cannot be realized."""
