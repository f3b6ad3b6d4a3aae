"""Exception hierarchy shared across the package."""


class AnsatzForgeError(Exception):
    """Base class for all package errors."""


class ValidationError(AnsatzForgeError):
    """Input violates a documented precondition or invariant."""


class DimensionError(ValidationError):
    """Operands have incompatible sizes (qubit counts, vector lengths)."""


class ResourceError(AnsatzForgeError):
    """Request exceeds a hard resource guard (qubit cap, space size)."""


class ParseError(AnsatzForgeError):
    """Text input does not match the expected format."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class FormatError(ParseError):
    """A proposal reply did not contain the expected bracket pattern."""

    def __init__(self, message, raw_text=""):
        super().__init__(message)
        self.raw_text = raw_text


class NumericalError(AnsatzForgeError):
    """Training produced a non-finite value."""

    def __init__(self, message, epoch=None):
        super().__init__(message)
        self.epoch = epoch


class ConfigurationError(AnsatzForgeError):
    """Missing or inconsistent runtime configuration (e.g. API key)."""


class TransportError(AnsatzForgeError):
    """HTTP transport failed after all retries."""


class ProtocolError(AnsatzForgeError):
    """Remote endpoint returned a body that does not match the wire shape."""


class ExhaustedError(AnsatzForgeError):
    """An enumerating proposer ran out of candidates."""
