# apps/kernel/exceptions.py
# ================================================================================
"""Exception hierarchy shared by every workbench app."""


class WorkbenchError(Exception):
    """Base class for all workbench failures."""


class SignatureError(WorkbenchError, ValueError):
    """Signatures disagree, or a symbol name is invalid or unknown."""


class StructureError(WorkbenchError, ValueError):
    """A structure, tuple or element reference is malformed."""


class EmbeddingError(WorkbenchError, ValueError):
    """A map is not a strong embedding."""


class PartitionError(WorkbenchError, ValueError):
    """An equivalence is not a partition of the universe."""


class LimitExceededError(WorkbenchError):
    """A size or work limit from ``WorkbenchLimits`` would be exceeded."""

    def __init__(self, what: str, value: float, limit: float) -> None:
        self.what = what
        self.value = value
        self.limit = limit
        super().__init__(f"{what}={value} exceeds the configured limit {limit}")


class TimeLimitExceededError(LimitExceededError):
    """The per-job deadline set by ``TIME_LIMIT_S`` has passed."""

    def __init__(self, limit_s: float) -> None:
        self.what = "time limit"
        self.value = self.limit = limit_s
        WorkbenchError.__init__(self, f"time limit of {limit_s:g}s exceeded")
