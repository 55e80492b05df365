"""Exception types raised across the package."""


class ParseError(ValueError):
    """A review line could not be turned into a record.

    ``kind`` is one of ``"MalformedJson"``, ``"MissingField"`` or ``"BadStars"``.
    """

    def __init__(self, kind, message, line_number=None):
        self.kind = kind
        self.line_number = line_number
        where = f"line {line_number}: " if line_number is not None else ""
        super().__init__(f"{where}{kind}: {message}")


class RangeError(ValueError):
    """Invalid line range or a split that would leave one side empty."""


class DegenerateInput(ValueError):
    """Training data cannot produce a usable model (one class, no features...)."""

    def __init__(self, reason, message=None):
        self.reason = reason
        super().__init__(message or reason)


class EmptyCorpus(DegenerateInput):
    def __init__(self, message="cannot fit on zero documents"):
        super().__init__("EmptyCorpus", message)


class DimensionMismatch(ValueError):
    """Feature matrix width does not match the fitted feature space."""


class FormatError(ValueError):
    """A model file is unreadable.

    ``kind`` is one of ``"BadMagic"``, ``"VersionMismatch"`` or ``"CorruptSection"``.
    """

    def __init__(self, kind, message):
        self.kind = kind
        super().__init__(f"{kind}: {message}")


class UsageError(Exception):
    """Bad command-line invocation."""
