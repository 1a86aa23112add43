"""Exception types shared across the package."""


class ScimetricsError(Exception):
    """Base class for all library errors."""


class CorpusFormatError(ScimetricsError):
    """Malformed or inconsistent input data; fatal at load time."""

    def __init__(self, message, path=None, line=None):
        loc = ""
        if path is not None:
            loc = f"{path}"
            if line is not None:
                loc += f":{line}"
            loc += ": "
        super().__init__(f"{loc}{message}")
        self.path = path
        self.line = line


class UnknownIdError(ScimetricsError):
    """An entity, metric, journal, or discipline id does not exist."""


class InsufficientDataError(ScimetricsError):
    """Not enough rows, entities, or eligible observations for the operation."""


class DegenerateInputError(ScimetricsError):
    """Structurally invalid argument: empty/degenerate window, zero variance, bad weights."""
