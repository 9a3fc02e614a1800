"""Exception hierarchy. Each class carries the CLI exit code for its failure class."""

from __future__ import annotations


class FuzzyTsfdError(Exception):
    exit_code = 1


class InvalidArgumentError(FuzzyTsfdError, ValueError):
    exit_code = 1


class DatasetIOError(FuzzyTsfdError, OSError):
    exit_code = 2


class ParseError(FuzzyTsfdError, ValueError):
    exit_code = 3

    def __init__(self, message: str, line: int | None = None) -> None:
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class EmptyDatasetError(ParseError):
    """The input contained a header but no data rows."""


class DegenerateDataError(FuzzyTsfdError, ValueError):
    exit_code = 4


class EmptyClusterError(DegenerateDataError):
    """A cluster lost all membership mass during an update."""


class DegenerateCentroidsError(DegenerateDataError):
    """Two centroids coincide, so separation-based indices are undefined."""


class InsufficientRangeError(FuzzyTsfdError, ValueError):
    exit_code = 5
