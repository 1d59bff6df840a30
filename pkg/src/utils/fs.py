"""Filesystem utilities for vortex-cavity run directories."""


import hashlib
import json
import os
import tempfile
from pathlib import Path
from typing import Any, Final

from constants import CACHE_VERSION

# Hidden stage-cache directory inside every run directory
CACHE_DIR_NAME: Final[str] = ".cache"
STAGES_DIR_NAME: Final[str] = "stages"


def sha256_file(path: Path) -> str:
    """Compute the SHA-256 hex digest of a file's contents.

    Streams the file in chunks to support large snapshots without high memory usage.
    """
    h = hashlib.sha256()
    with path.open("rb") as f:
        for chunk in iter(lambda: f.read(1024 * 1024), b""):
            h.update(chunk)
    return h.hexdigest()


def canonical_json(payload: Any) -> str:
    """JSON with sorted keys and no insignificant whitespace."""
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), default=str)


def sha256_json(payload: Any) -> str:
    return hashlib.sha256(canonical_json(payload).encode("utf-8")).hexdigest()


def atomic_write_text(path: Path, content: str) -> None:
    """Write content atomically via a temp file and os.replace; cleans up the temp file on failure."""
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp_path: Path | None = None
    try:
        with tempfile.NamedTemporaryFile(
            mode="w", encoding="utf-8", dir=path.parent, suffix=".tmp", delete=False
        ) as tmp:
            tmp_path = Path(tmp.name)
            tmp.write(content)
            tmp.flush()
            os.fsync(tmp.fileno())
        os.replace(tmp_path, path)
    except BaseException:
        if tmp_path is not None and tmp_path.exists():
            tmp_path.unlink()
        raise


def ensure_run_layout(run_dir: Path) -> Path:
    """Ensure the on-disk layout of a run directory exists.

    Creates the following structure if missing:

    - <run_dir>/
      - stages/
      - .cache/
        - version (file; contains the current CACHE_VERSION)

    The operation is idempotent: calling it multiple times is safe.
    """
    (run_dir / STAGES_DIR_NAME).mkdir(parents=True, exist_ok=True)
    cache_root = run_dir / CACHE_DIR_NAME
    cache_root.mkdir(parents=True, exist_ok=True)

    version_file = cache_root / "version"
    if not version_file.exists():
        version_file.write_text(f"{CACHE_VERSION}\n", encoding="utf-8")

    return cache_root
