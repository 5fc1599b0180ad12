# apps/partition/exceptions.py
# ================================================================================
from apps.kernel.exceptions import WorkbenchError


class WitnessError(WorkbenchError, ValueError):
    """A pattern or a candidate witness is not a member of the class."""


class HypothesisError(WorkbenchError, ValueError):
    """A constructive builder was called on a class that misses one of its hypotheses."""


class ColoringError(WorkbenchError, ValueError):
    """A coloring is partial, out of range, or uses fewer than two colors."""
