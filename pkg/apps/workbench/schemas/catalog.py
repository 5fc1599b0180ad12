# apps/workbench/schemas/catalog.py
# ================================================================================
"""
Schema of one repro catalog case, as read from the YAML files under
``apps/workbench/catalog/``.
"""

from __future__ import annotations

from enum import StrEnum
from typing import Any, Final

from pydantic import BaseModel, ConfigDict, Field

from apps.kernel.datatype import Verdict

CASE_ID_PATTERN: Final[str] = r"^[a-z0-9][a-z0-9.-]*$"


class Provenance(StrEnum):
    PUBLISHED = "published"  # a worked example or counterexample from the literature
    DERIVED = "derived"  # follows from a published result
    TRIVIAL = "trivial"


class ReproCase(BaseModel):
    """One executable check: an operation, its inputs and the verdict it must reach."""

    id: str = Field(pattern=CASE_ID_PATTERN)
    # cases sharing a group run together under the group name
    group: str | None = Field(default=None, pattern=CASE_ID_PATTERN)
    operation: str
    document: str = ""  # DSL bindings the operation reads by name
    params: dict[str, Any] = Field(default_factory=dict)
    expected: Verdict
    anchor: str = Field(min_length=1)
    provenance: Provenance

    model_config = ConfigDict(frozen=True, extra="forbid")
