"""Exception types shared across the package."""


class EntropicTuranError(Exception):
    """Base class for all errors raised by this package."""


class InvalidParameters(EntropicTuranError, ValueError):
    pass


class NoEdges(EntropicTuranError, ValueError):
    pass


class SymmetryViolation(EntropicTuranError, ValueError):
    pass


class PreconditionFailure(EntropicTuranError, ValueError):
    """A documented precondition does not hold; ``witness`` carries the evidence."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotAForest(EntropicTuranError, ValueError):
    def __init__(self, message, vertex=None):
        super().__init__(message)
        self.vertex = vertex


class TooLarge(EntropicTuranError, RuntimeError):
    """A size guard tripped before an exhaustive computation started."""


class NotCertified(EntropicTuranError, RuntimeError):
    pass


class HypergraphFormatError(EntropicTuranError, ValueError):
    def __init__(self, message, line=None, column=None):
        loc = ""
        if line is not None:
            loc = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(loc + message)
        self.line = line
        self.column = column
