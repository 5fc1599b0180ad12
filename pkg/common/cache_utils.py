# common/cache_utils.py
from __future__ import annotations

import hashlib
import urllib.parse
from typing import Any, cast

import orjson
import structlog
from django.core.cache import BaseCache, caches

log = structlog.get_logger(__name__).bind(component="CacheUtils")

ORJSON_OPTIONS = orjson.OPT_SORT_KEYS | orjson.OPT_NON_STR_KEYS


# ===================================================================
# 0.  Core helpers
# ===================================================================
def _dumps(obj: Any) -> bytes:
    return orjson.dumps(obj, option=ORJSON_OPTIONS)


def _loads(raw: bytes) -> Any:
    return orjson.loads(raw)


def content_hash(obj: Any) -> str:
    """Stable sha256 over the sorted-key orjson encoding of ``obj``."""
    return hashlib.sha256(_dumps(obj)).hexdigest()


# ===================================================================
# 1.  Cache-key builder
# ===================================================================
def build_cache_key(prefix: str, **params: Any) -> str:
    """
    Builds a stable, filesystem-safe cache key from a prefix and parameters.
    Falls back to an MD5 hash when the resulting key would exceed 250 bytes.
    """
    HASH_SALT = "workbench-cache-salt"
    MEMCACHED_MAX = 250

    if not params:
        return prefix

    query = urllib.parse.urlencode(sorted(params.items()), doseq=True)
    key = f"{prefix}:{query}"

    if len(key) <= MEMCACHED_MAX:
        return key

    digest = hashlib.md5(f"{query}:{HASH_SALT}".encode(), usedforsecurity=False).hexdigest()
    cut = MEMCACHED_MAX - len(digest) - 1
    return f"{prefix[:cut]}:{digest}"


# ===================================================================
# 2.  JSON convenience wrappers
# ===================================================================
def _resolve(backend: BaseCache | str | None) -> BaseCache:
    if backend is None:
        return caches["default"]
    if isinstance(backend, str):
        return caches[backend]
    return backend


def get_json[T](key: str, default: T | None = None, *, backend: BaseCache | str | None = None) -> T | None:
    store = _resolve(backend)
    raw = store.get(key)
    if raw is None:
        return default
    try:
        return cast("T", _loads(raw))
    except (orjson.JSONDecodeError, ValueError, TypeError):
        log.warning("Corrupt JSON in cache – deleting", key=key)
        store.delete(key)
        return default


def set_json(key: str, value: Any, ttl: int | None = None, *, backend: BaseCache | str | None = None) -> None:
    _resolve(backend).set(key, _dumps(value), timeout=ttl)
