"""Exception hierarchy for the package.

Two broad families matter to callers: problems with the input data
(bad CSV rows, incompatible calendars) and problems with the requested
configuration (window larger than the data, invalid parameter ranges).
The CLI maps them to distinct exit codes.
"""

from __future__ import annotations


class PhSignalError(Exception):
    """Base class for all package errors."""


class InputDataError(PhSignalError):
    """Raised when input files or series content are unusable."""


class ConfigError(PhSignalError):
    """Raised when a requested configuration is invalid for the data."""


class MissingColumn(InputDataError):
    def __init__(self, path: str, column: str):
        super().__init__(f"{path}: required column {column!r} not found in header")
        self.path = path
        self.column = column


class UnparsableRow(InputDataError):
    def __init__(self, path: str, line_number: int, detail: str):
        super().__init__(f"{path}:{line_number}: {detail}")
        self.path = path
        self.line_number = line_number


class DuplicateDate(InputDataError):
    def __init__(self, path: str, line_number: int, date):
        super().__init__(f"{path}:{line_number}: duplicate date {date}")
        self.path = path
        self.line_number = line_number
        self.date = date


class NonPositivePrice(InputDataError):
    def __init__(self, path: str, line_number: int, value: float):
        super().__init__(f"{path}:{line_number}: close must be a positive finite number, got {value!r}")
        self.path = path
        self.line_number = line_number
        self.value = value


class EmptyIntersection(InputDataError):
    def __init__(self):
        super().__init__("series share no common dates")


class TooShort(InputDataError):
    def __init__(self, length: int):
        super().__init__(f"need at least 2 aligned prices to form returns, got {length}")
        self.length = length


class WindowTooLarge(ConfigError):
    def __init__(self, size: int, points: int):
        super().__init__(f"window size {size} exceeds the {points} available points")
        self.size = size
        self.points = points


class SeriesTooShort(InputDataError):
    def __init__(self, length: int, needed: int):
        super().__init__(f"signal series has {length} entries, need at least {needed}")
        self.length = length
        self.needed = needed


class DimensionMismatch(PhSignalError):
    def __init__(self, a: int, b: int):
        super().__init__(f"persistence diagrams have different homology dimensions: {a} vs {b}")


class TooFewDiagrams(ConfigError):
    def __init__(self, count: int):
        super().__init__(f"need at least 2 diagrams for consecutive distances, got {count}")
        self.count = count
