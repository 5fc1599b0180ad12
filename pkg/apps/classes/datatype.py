"""Membership certificates."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any


@dataclass(slots=True, frozen=True, kw_only=True)
class Membership:
    """Verdict of ``explain_membership`` with the certificate or counter-witness behind it."""

    member: bool
    reason: str = ""
    witness: Any = None

    def __bool__(self) -> bool:
        return self.member


YES = Membership(member=True)
