"""Workbench constants, exit codes and command parameter models."""

from __future__ import annotations

import secrets
from enum import IntEnum, StrEnum
from pathlib import Path
from typing import Final

from pydantic import BaseModel, ConfigDict, Field

# ─── Paths ──────────────────────────────────────────────────────────────────────

CATALOG_DIR: Final[Path] = Path(__file__).resolve().parent / "catalog"
CATALOG_GLOB: Final[str] = "*.yaml"

# ─── Run cache ──────────────────────────────────────────────────────────────────

RUN_CACHE_PREFIX: Final[str] = "run"
RUN_RECORD_VERSION: Final[int] = 1


# ─── Exit codes ─────────────────────────────────────────────────────────────────


class ExitCode(IntEnum):
    PASS = 0
    FAIL = 1
    INCONCLUSIVE = 2
    USAGE = 3


class OutputFormat(StrEnum):
    DSL = "dsl"
    JSON = "json"


# ─── DOT export ─────────────────────────────────────────────────────────────────

DOT_GRAPH_NAME: Final[str] = "structure"
DOT_FACTOR_SHAPE: Final[str] = "point"
# Binary symbols with this prefix (E, E0, E_1, ...) name symmetric relations.
DOT_UNDIRECTED_PREFIX: Final[str] = "E"


# ─── Parameters ─────────────────────────────────────────────────────────────────


class ReproRunParams(BaseModel):
    """Options of one ``repro`` invocation."""

    case_ids: tuple[str, ...] = ()
    jobs: int = Field(default=1, ge=1, le=64)
    use_cache: bool = True
    sample_percent: int = Field(default=10, ge=0, le=100)
    # picks which hits are audited; fresh per run unless given
    audit_seed: int = Field(default_factory=lambda: secrets.randbits(32), ge=0)

    model_config = ConfigDict(frozen=True)
