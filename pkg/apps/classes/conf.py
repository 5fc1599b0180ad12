"""Classes configuration and constants."""

from __future__ import annotations

from typing import Final

# ─── Completion engine ──────────────────────────────────────────────────────────

# Induced substructures up to this size are checked while completing a
# hereditary class (raised to the largest arity when that is bigger).
LOCAL_CHECK_SIZE: Final[int] = 3

# Upper bound on free tuples when no local pruning is possible.
UNPRUNED_MAX_FREE_TUPLES: Final[int] = 20

# ─── Enumeration ────────────────────────────────────────────────────────────────

ENUMERATION_CACHE_SIZE: Final[int] = 512
