"""Kernel constants and the active search limits."""

from __future__ import annotations

import time
from contextlib import contextmanager
from contextvars import ContextVar
from typing import TYPE_CHECKING, Final

from django.conf import settings

from apps.kernel.exceptions import TimeLimitExceededError

if TYPE_CHECKING:
    from collections.abc import Iterator

    from config.settings.base import WorkbenchLimits

# ─── Constants ──────────────────────────────────────────────────────────────────

CANONICAL_CACHE_SIZE: Final[int] = 65_536
EMBEDDING_PLAN_CACHE_SIZE: Final[int] = 4_096

# ─── Limits ─────────────────────────────────────────────────────────────────────

_LIMITS_OVERRIDE: ContextVar[WorkbenchLimits | None] = ContextVar("workbench_limits", default=None)


def current_limits() -> WorkbenchLimits:
    """Limits in effect: a scoped override, else ``settings.WORKBENCH_LIMITS``."""
    return _LIMITS_OVERRIDE.get() or settings.WORKBENCH_LIMITS


@contextmanager
def override_limits(limits: WorkbenchLimits) -> Iterator[WorkbenchLimits]:
    token = _LIMITS_OVERRIDE.set(limits)
    try:
        yield limits
    finally:
        _LIMITS_OVERRIDE.reset(token)


def install_limits(limits: WorkbenchLimits) -> None:
    """Make ``limits`` the process-wide default; used by pool workers."""
    _LIMITS_OVERRIDE.set(limits)


# ─── Deadline ───────────────────────────────────────────────────────────────────

# (monotonic instant, the limit it came from)
_DEADLINE: ContextVar[tuple[float, float] | None] = ContextVar("workbench_deadline", default=None)


@contextmanager
def deadline(timeout_s: float | None) -> Iterator[None]:
    """Bounds the enclosed work to ``timeout_s`` seconds from now.

    ``None`` leaves the enclosing deadline in place; nested deadlines only
    ever tighten it.
    """
    if timeout_s is None:
        yield
        return
    bound = (time.monotonic() + timeout_s, timeout_s)
    outer = _DEADLINE.get()
    token = _DEADLINE.set(bound if outer is None or bound[0] < outer[0] else outer)
    try:
        yield
    finally:
        _DEADLINE.reset(token)


def check_deadline() -> None:
    """Raises ``TimeLimitExceededError`` once the active deadline has passed."""
    bound = _DEADLINE.get()
    if bound is not None and time.monotonic() > bound[0]:
        raise TimeLimitExceededError(bound[1])
