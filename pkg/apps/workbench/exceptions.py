# apps/workbench/exceptions.py
# ================================================================================
from apps.kernel.exceptions import WorkbenchError


class DslError(WorkbenchError, ValueError):
    """Text that does not parse, or parses into an invalid structure or class."""

    def __init__(self, message: str, line: int = 0, column: int = 0) -> None:
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"{message} (line {line}, column {column})" if line else message)


class CatalogError(WorkbenchError, ValueError):
    """A catalog file is malformed or names an unknown operation."""


class UnknownCaseError(WorkbenchError, LookupError):
    """No catalog case carries the requested id."""
