class SSCError(Exception):
    """Base class for domain errors raised by this package."""


class DimensionError(SSCError, ValueError):
    pass


class CodeFileError(SSCError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class CapExceeded(SSCError):
    """Enumeration would exceed the configured size cap."""


class TerminationInfeasible(SSCError):
    """No input sequence drives the encoder back to the zero state."""


class NoValidCodeword(SSCError):
    """Every candidate path violates the termination constraint."""
