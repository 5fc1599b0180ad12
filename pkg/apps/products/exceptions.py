# apps/products/exceptions.py
# ================================================================================
from apps.kernel.exceptions import WorkbenchError


class DecompositionError(WorkbenchError, ValueError):
    """Input to a product construction or decomposition is malformed."""
