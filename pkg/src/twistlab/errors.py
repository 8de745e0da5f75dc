"""Exception types shared across the package."""


class TwistlabError(Exception):
    """Base class for all errors raised by twistlab."""


class ParseError(TwistlabError):
    """Malformed input document; carries the offending line number when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ValidationError(TwistlabError):
    """A structural invariant of a complex, system, or map is violated."""


class CapacityError(TwistlabError):
    """Input exceeds the configured desk-scale size bounds."""


class RingMismatchError(TwistlabError):
    """Operands were built over incompatible coefficient rings or bases."""
