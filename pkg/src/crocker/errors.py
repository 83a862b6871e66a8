"""Exception types shared across the package."""


class InvalidInput(ValueError):
    """Raised when arguments violate an operation's preconditions."""


class IoError(OSError):
    """Raised when a file the pipeline depends on cannot be read or written."""
