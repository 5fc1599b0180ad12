# apps/workbench/schemas/records.py
# ================================================================================
"""Cached outcome of one command or catalog case."""

from __future__ import annotations

from typing import Any

from pydantic import BaseModel, ConfigDict, Field

from apps.kernel.datatype import Verdict
from apps.workbench.conf import RUN_RECORD_VERSION


class RunRecord(BaseModel):
    command: str
    config_hash: str
    verdict: Verdict
    detail: str = ""
    witnesses: list[Any] = Field(default_factory=list)
    wall_time: float = Field(ge=0)
    version: int = RUN_RECORD_VERSION

    model_config = ConfigDict(frozen=True)

    def same_outcome(self, other: RunRecord) -> bool:
        """Equal verdicts and witnesses; timings and details are ignored."""
        return self.verdict == other.verdict and self.witnesses == other.witnesses
