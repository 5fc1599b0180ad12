"""Verdicts and reports returned by every checker."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import StrEnum
from typing import Any


class Verdict(StrEnum):
    PASS = "pass"
    FAIL = "fail"
    INCONCLUSIVE = "inconclusive"

    @classmethod
    def worst(cls, verdicts: list[Verdict]) -> Verdict:
        """FAIL beats INCONCLUSIVE beats PASS; an empty list passes."""
        if cls.FAIL in verdicts:
            return cls.FAIL
        if cls.INCONCLUSIVE in verdicts:
            return cls.INCONCLUSIVE
        return cls.PASS


@dataclass(slots=True, frozen=True, kw_only=True)
class CheckReport:
    """Outcome of one property check.

    ``witness`` is a domain object (amalgam, counter-instance, coloring, ...);
    ``detail`` is a short human-readable reason; ``stats`` holds counters.
    """

    verdict: Verdict
    detail: str = ""
    witness: Any = None
    stats: dict[str, int] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict is Verdict.PASS

    @property
    def failed(self) -> bool:
        return self.verdict is Verdict.FAIL
