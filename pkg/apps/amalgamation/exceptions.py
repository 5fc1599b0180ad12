# apps/amalgamation/exceptions.py
# ================================================================================
from apps.kernel.exceptions import WorkbenchError


class AmalgamationError(WorkbenchError, ValueError):
    """An amalgamation system or builder input violates a precondition."""
