"""Partition configuration, constants and search parameter models."""

from __future__ import annotations

from typing import Final, Self

from pydantic import BaseModel, ConfigDict, Field, model_validator

# ─── Constants ──────────────────────────────────────────────────────────────────

# The exhaustive colouring oracle refuses hosts with more colourings than this.
EXHAUSTIVE_MAX_COLORINGS: Final[int] = 1 << 20

# Base size of the disjoint 3-amalgamation sweep run before ``dss_from_3amalg``.
HYPOTHESIS_BASE: Final[int] = 2

# Largest instance size accepted by the definable self-similarity sweep.
DSS_MAX_SIZE: Final[int] = 4


# ─── Search parameters ──────────────────────────────────────────────────────────


class ColoringSearchParams(BaseModel):
    """Bounds for one indivisibility witness search."""

    colors: int = Field(default=2, ge=2, le=64)
    max_size: int = Field(default=6, ge=0, le=12)

    model_config = ConfigDict(frozen=True)


class DssSearchParams(BaseModel):
    """Bounds for the definable self-similarity sweep."""

    size: int = Field(default=2, ge=0, le=DSS_MAX_SIZE)
    host: int | None = Field(default=None, ge=0, le=16)
    one_point: bool = True

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def _host_covers_size(self) -> Self:
        if self.host is not None and self.host < self.size:
            msg = f"host bound {self.host} is below the instance size {self.size}"
            raise ValueError(msg)
        return self
