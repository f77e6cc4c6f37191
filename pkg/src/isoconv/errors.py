"""Exception hierarchy shared by all isoconv modules."""

from __future__ import annotations


class IsoconvError(Exception):
    """Base class for every error raised by this package."""


class DivisionByZero(IsoconvError, ZeroDivisionError):
    pass


class ShapeError(IsoconvError, ValueError):
    pass


class EmptyMessage(IsoconvError, ValueError):
    pass


class FieldTooSmall(IsoconvError):
    pass


class BudgetExceeded(IsoconvError):
    pass


class NotRealizable(IsoconvError):
    pass


class NotReduced(IsoconvError):
    pass


class DegreeBound(IsoconvError):
    pass


class DegenerateField(IsoconvError):
    pass


class PrefixUnknown(IsoconvError):
    pass


class IntegrityError(IsoconvError):
    """Received data is inconsistent with every codeword (corrupted input)."""


class PatternError(IsoconvError, ValueError):
    pass


class SoundnessError(IsoconvError, AssertionError):
    """A decoder produced a value that differs from the transmitted one."""

    def __init__(self, message: str, seed: int | None = None) -> None:
        super().__init__(message if seed is None else f"{message} (reproduce with seed={seed})")
        self.seed = seed


class ParseError(IsoconvError, ValueError):
    """Malformed input file; carries 1-based line/column when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None) -> None:
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)
        self.line = line
        self.column = column
