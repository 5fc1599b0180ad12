# apps/configurations/exceptions.py
# ================================================================================
from apps.kernel.exceptions import WorkbenchError


class FormulaError(WorkbenchError, ValueError):
    """A formula refers to an unknown symbol, an out-of-range variable, or an unassigned one."""


class ConfigurationError(WorkbenchError, ValueError):
    """A configuration cannot be built: missing entries, mismatched targets, too small a target."""


class InjectivityError(ConfigurationError):
    """A construction needs an injective configuration and was given one that is not."""
