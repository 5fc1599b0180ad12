# apps/classes/exceptions.py
# ================================================================================
from apps.kernel.exceptions import WorkbenchError


class MembershipError(WorkbenchError):
    """Membership could not be decided within the configured bounds."""


class UnknownClassError(WorkbenchError, KeyError):
    """No builtin class with that name."""
