"""Error classes for bglfrps."""

from typing import Any, Optional


class BglfrpsError(Exception):
    """Base class for all bglfrps errors."""


class DomainError(BglfrpsError, ValueError):
    """Raised when a parameter or argument lies outside its domain."""

    def __init__(self, parameter: str, value: Any, reason: str):
        self.parameter = parameter
        self.value = value
        self.reason = reason

        super().__init__(f"Domain error for {parameter}={value!r}: {reason}")


class UndefinedConditionalError(BglfrpsError):
    """Raised when conditioning on an event of zero probability or density."""

    def __init__(self, reason: str):
        self.reason = reason
        super().__init__(f"Undefined conditional: {reason}")


class DegenerateDataError(BglfrpsError):
    """Raised when a sample carries too little information to fit."""

    def __init__(self, reason: str):
        self.reason = reason
        super().__init__(f"Degenerate data: {reason}")


class BracketError(BglfrpsError):
    """Raised when a root bracket does not change sign."""

    def __init__(self, lower: float, upper: float, f_lower: float, f_upper: float):
        self.lower = lower
        self.upper = upper
        self.f_lower = f_lower
        self.f_upper = f_upper

        super().__init__(
            f"No sign change on [{lower}, {upper}]: f={f_lower} and f={f_upper}"
        )


class IngestionError(BglfrpsError):
    """Raised when a data file cannot be parsed."""

    def __init__(self, reason: str, line: Optional[int] = None):
        self.reason = reason
        self.line = line

        where = f" (line {line})" if line is not None else ""
        super().__init__(f"Cannot read data{where}: {reason}")
