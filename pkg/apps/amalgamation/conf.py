"""Amalgamation configuration, constants and search parameter models."""

from __future__ import annotations

from typing import Final, Self

from pydantic import BaseModel, ConfigDict, Field, model_validator

# ─── Constants ──────────────────────────────────────────────────────────────────

# Largest arity accepted by the disjoint n-amalgamation checker.
MAX_SYSTEM_ARITY: Final[int] = 4

# Prefix of the unary marks used to compare base systems up to isomorphism.
ORIGIN_MARK_PREFIX: Final[str] = "_U"

# Sweeps log a progress line every this many instances.
SWEEP_LOG_EVERY: Final[int] = 250


# ─── Search parameters ──────────────────────────────────────────────────────────


class AmalgamSearchParams(BaseModel):
    """Bounds for one class-level amalgamation check."""

    base: int = Field(default=2, ge=0, le=8)
    host: int = Field(default=6, ge=0, le=16)
    strong: bool = False
    pad: int = Field(default=0, ge=0, le=4)

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def _host_covers_base(self) -> Self:
        if self.host < self.base:
            msg = f"host bound {self.host} is below the base bound {self.base}"
            raise ValueError(msg)
        return self


class DisjointAmalgamParams(BaseModel):
    """Bounds for the disjoint n-amalgamation checker."""

    n: int = Field(default=3, ge=2, le=MAX_SYSTEM_ARITY)
    base: int = Field(default=2, ge=0, le=6)
    pad: int = Field(default=0, ge=0, le=4)

    model_config = ConfigDict(frozen=True)
