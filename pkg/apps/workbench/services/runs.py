# apps/workbench/services/runs.py
# ================================================================================
"""
Content-addressed cache of ``RunRecord`` objects.

The key hashes the command, its inputs, the active ``WorkbenchLimits`` and the
record version, so a replay with identical inputs returns the stored record
unchanged.  A share of hits, drawn afresh by each run's audit seed, is
recomputed to audit the cache.
"""

from __future__ import annotations

from typing import TYPE_CHECKING, Any

import structlog
from django.conf import settings
from django.core.cache.backends.filebased import FileBasedCache
from pydantic import ValidationError

from apps.kernel.conf import current_limits
from apps.workbench.conf import RUN_CACHE_PREFIX, RUN_RECORD_VERSION
from apps.workbench.schemas.records import RunRecord
from common.cache_utils import build_cache_key, content_hash, get_json, set_json

if TYPE_CHECKING:
    from collections.abc import Mapping
    from pathlib import Path

    from django.core.cache import BaseCache

log = structlog.get_logger(__name__).bind(component="RunCache")

type Backend = BaseCache | str


def run_cache(cache_dir: Path | None = None) -> Backend:
    """The configured run cache, or a file cache at ``cache_dir``."""
    if cache_dir is None:
        return settings.RUN_CACHE_ALIAS
    return FileBasedCache(str(cache_dir), {"TIMEOUT": None})


def config_hash(command: str, inputs: Mapping[str, Any]) -> str:
    return content_hash({
        "command": command,
        "inputs": dict(inputs),
        "limits": current_limits().model_dump(mode="json"),
        "version": RUN_RECORD_VERSION,
    })


def record_key(digest: str) -> str:
    return build_cache_key(RUN_CACHE_PREFIX, hash=digest)


def load_record(digest: str, *, backend: Backend) -> RunRecord | None:
    raw = get_json(record_key(digest), backend=backend)
    if raw is None:
        return None
    try:
        return RunRecord.model_validate(raw)
    except ValidationError:
        log.warning("stale run record ignored", key=record_key(digest))
        return None


def store_record(record: RunRecord, *, backend: Backend) -> None:
    set_json(record_key(record.config_hash), record.model_dump(mode="json"), backend=backend)


def in_audit_sample(digest: str, percent: int, seed: int = 0) -> bool:
    """``percent``% of hashes; each ``seed`` picks a different share."""
    return int(content_hash({"digest": digest, "seed": seed})[:8], 16) % 100 < percent


def reconcile(cached: RunRecord, fresh: RunRecord, *, backend: Backend) -> RunRecord:
    """Compare an audited hit with its recomputation; the fresh record wins on a mismatch."""
    if cached.same_outcome(fresh):
        return cached
    log.warning(
        "cached run disagrees with recomputation",
        command=fresh.command,
        cached=str(cached.verdict),
        fresh=str(fresh.verdict),
    )
    store_record(fresh, backend=backend)
    return fresh
