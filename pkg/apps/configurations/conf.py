"""Configuration builders, constants and parameter models."""

from __future__ import annotations

from typing import Final, Literal

from pydantic import BaseModel, ConfigDict, Field

# ─── Constants ──────────────────────────────────────────────────────────────────

type BuiltinName = Literal["dg_to_g", "g_to_po", "g_to_t"]

BUILTIN_CONFIGURATIONS: Final[tuple[BuiltinName, ...]] = ("dg_to_g", "g_to_po", "g_to_t")

# Source class, target class and block width of each builtin.
BUILTIN_SHAPES: Final[dict[str, tuple[str, str, int]]] = {
    "dg_to_g": ("digraphs", "graphs", 2),
    "g_to_po": ("graphs", "partial_orders", 2),
    "g_to_t": ("graphs", "tournaments", 2),
}

# Verification logs a progress line every this many entries.
VERIFY_LOG_EVERY: Final[int] = 100


# ─── Build parameters ───────────────────────────────────────────────────────────


class ConfigBuildParams(BaseModel):
    """Bounds for building a configuration witness over every index structure up to a size."""

    name: BuiltinName = "dg_to_g"
    max_size: int = Field(default=3, ge=0, le=7)

    model_config = ConfigDict(frozen=True)


class TransferParams(BaseModel):
    """Bounds for the entries of a product transfer."""

    kind: Literal["lex", "full", "super"] = "lex"
    max_size: int = Field(default=3, ge=0, le=6)

    model_config = ConfigDict(frozen=True)
