"""Exception hierarchy shared by services, the CLI and the HTTP app."""
from typing import Any, Dict, List, Optional


class SeqCertError(Exception):
    """Base error. ``exit_code`` is what the CLI returns for it."""

    exit_code: int = 2

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}


class ParameterError(SeqCertError, ValueError):
    """Invalid family, parameters, index range or precision settings."""

    exit_code = 2


class NonPositiveTermError(ParameterError):
    """A term inside a checked range is not strictly positive."""

    def __init__(self, index: int, value: str):
        super().__init__(
            f"term at index {index} is not strictly positive: {value}",
            {"index": index, "value": value},
        )
        self.index = index


class CacheFormatError(SeqCertError, ValueError):
    """A cache file failed validation."""

    exit_code = 2

    def __init__(
        self,
        message: str,
        line_number: Optional[int] = None,
        index: Optional[int] = None,
    ):
        details: Dict[str, Any] = {}
        if line_number is not None:
            details["line"] = line_number
            message = f"line {line_number}: {message}"
        if index is not None:
            details["index"] = index
        super().__init__(message, details)
        self.line_number = line_number
        self.index = index


class UndecidableError(SeqCertError):
    """An interval claim still straddles its threshold at maximum precision."""

    exit_code = 3


class SolverError(SeqCertError):
    """The lambda solver could not produce a certified root."""

    exit_code = 3

    def __init__(self, message: str, brackets: Optional[List[Any]] = None, mesh: Optional[int] = None):
        details: Dict[str, Any] = {}
        if brackets is not None:
            details["brackets"] = [[str(a), str(b)] for a, b in brackets]
        if mesh is not None:
            details["mesh"] = mesh
        super().__init__(message, details)
        self.brackets = brackets or []


class IntegralityError(SeqCertError, ArithmeticError):
    """An exact sum that must be an integer was not."""

    exit_code = 3


class EnclosureError(SeqCertError, ArithmeticError):
    """Two enclosures of one quantity are disjoint, or an enclosure is unbounded."""

    exit_code = 3


class CacheWriteError(SeqCertError):
    """A cache file could not be written."""

    exit_code = 2

    def __init__(self, message: str, path: Optional[str] = None):
        super().__init__(message, {"path": path} if path else None)
        self.path = path
