"""Exception types shared across the package."""
from __future__ import annotations


class LakebenchError(Exception):
    """Base class for operational errors raised by lakebench."""


class ParseError(LakebenchError):
    """Malformed content in an input file."""

    def __init__(self, path, message: str, lineno: int | None = None):
        self.path = str(path)
        self.lineno = lineno
        where = f"{self.path}:{lineno}" if lineno is not None else self.path
        super().__init__(f"{where}: {message}")


class ReferentialIntegrityError(LakebenchError):
    """A record references an id that does not exist."""

    def __init__(self, message: str, offending_id=None):
        self.offending_id = offending_id
        super().__init__(message)


class ConfigError(LakebenchError):
    """A configuration value violates its invariants."""
