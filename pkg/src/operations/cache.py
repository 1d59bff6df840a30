"""Stage cache: JSON entries keyed by the digest of everything a stage reads."""

import json
import logging
from pathlib import Path
from typing import Any, Generic, TypeVar

from pydantic import BaseModel, Field

from constants import CACHE_VERSION, FILESYSTEM_IO_ERRORS
from operations.models import EstimateSource, StageName
from utils.fs import atomic_write_text, sha256_json

logger = logging.getLogger(__name__)

_CACHE_LOAD_ERRORS: tuple[type[Exception], ...] = (*FILESYSTEM_IO_ERRORS, json.JSONDecodeError, ValueError)


class StageCacheEntry(BaseModel):

    key: str = Field(..., description="Digest of the stage inputs")
    stage: StageName = Field(..., description="Stage that produced the entry")
    cache_version: int = Field(..., description="Cache schema version")
    mode: EstimateSource = Field(..., description="Variant the stage ran in")
    payload: dict[str, Any] = Field(..., description="Stage outcome as JSON")
    outputs: dict[str, str] = Field(default_factory=dict, description="Output file → SHA-256")
    warnings: list[str] = Field(default_factory=list)


def build_stage_key(stage: StageName, config_subset: dict[str, Any], upstream: dict[str, str]) -> str:
    """SHA-256 over the stage name, its config sections, upstream digests and the cache version."""
    return sha256_json(
        {"stage": stage.value, "config": config_subset, "upstream": upstream, "cache_version": CACHE_VERSION}
    )


def stage_digest(payload: dict[str, Any], outputs: dict[str, str]) -> str:
    """Identity of a completed stage as seen by the stages downstream of it."""
    return sha256_json({"payload": payload, "outputs": outputs})


T = TypeVar("T", bound=BaseModel)


class CacheStore(Generic[T]):
    """JSON files named by key; a file whose recorded key or version disagrees is a miss."""

    def __init__(self, entry_type: type[T]) -> None:
        self._entry_type = entry_type

    def load(self, cache_dir: Path, key: str) -> T | None:
        cache_file = cache_dir / f"{key}.json"
        try:
            if not cache_file.exists():
                return None
            data = json.loads(cache_file.read_text(encoding="utf-8"))
            entry = self._entry_type.model_validate(data)
            if data.get("key") != key or data.get("cache_version") != CACHE_VERSION:
                logger.debug("Stale cache entry %s ignored", cache_file)
                return None
            return entry
        except _CACHE_LOAD_ERRORS as e:
            logger.warning("Cache load failed (cache_file=%s): %s: %s", cache_file, type(e).__name__, e)
            return None

    def save(self, cache_dir: Path, key: str, entry: T) -> None:
        """Persist ``entry`` atomically; failures are logged and the run carries on uncached."""
        try:
            atomic_write_text(cache_dir / f"{key}.json", entry.model_dump_json(indent=2) + "\n")
        except FILESYSTEM_IO_ERRORS as e:
            logger.warning("Cache save failed (key=%s): %s: %s", key, type(e).__name__, e)


stage_store: CacheStore[StageCacheEntry] = CacheStore(StageCacheEntry)
