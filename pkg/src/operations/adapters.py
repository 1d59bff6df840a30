import logging
from pathlib import Path

from constants import FILESYSTEM_IO_ERRORS
from micromag.grid import MagGrid, Magnetization
from micromag.ovf import read_ovf, write_ovf
from operations.cache import StageCacheEntry, stage_store
from operations.models import StageName
from utils.fs import CACHE_DIR_NAME, STAGES_DIR_NAME, atomic_write_text, ensure_run_layout, sha256_file

logger = logging.getLogger(__name__)


class FilesystemArtifactWriter:
    """Lays stage outputs out under ``<run_dir>/stages/<stage>/``."""

    def __init__(self, run_dir: Path) -> None:
        self._run_dir = run_dir
        ensure_run_layout(run_dir)

    def path(self, stage: StageName, name: str) -> Path:
        return self._run_dir / STAGES_DIR_NAME / stage.value / name

    def write_text(self, stage: StageName, name: str, content: str) -> str:
        target = self.path(stage, name)
        atomic_write_text(target, content)
        logger.debug("Wrote %s", target)
        return sha256_file(target)

    def write_script(self, stage: StageName, name: str, content: str) -> str:
        digest = self.write_text(stage, name, content)
        self.path(stage, name).chmod(0o755)
        return digest

    def write_ovf(self, stage: StageName, name: str, mag: Magnetization, grid: MagGrid) -> str:
        target = self.path(stage, name)
        write_ovf(target, mag, grid)
        return sha256_file(target)

    def read_ovf(self, stage: StageName, name: str, *, Ms: float) -> tuple[Magnetization, MagGrid]:
        return read_ovf(self.path(stage, name), Ms=Ms)

    def write_run_file(self, name: str, content: str) -> None:
        atomic_write_text(self._run_dir / name, content)


class FilesystemStageCache:
    """Entries live in ``<run_dir>/.cache``; a hit also requires the stage outputs to match their digests."""

    def __init__(self, run_dir: Path) -> None:
        self._run_dir = run_dir
        self._cache_dir = run_dir / CACHE_DIR_NAME

    def load(self, stage: StageName, key: str) -> StageCacheEntry | None:
        entry = stage_store.load(self._cache_dir, key)
        if entry is None or entry.stage is not stage:
            return None
        for name, digest in entry.outputs.items():
            path = self._run_dir / STAGES_DIR_NAME / stage.value / name
            try:
                current = sha256_file(path)
            except FILESYSTEM_IO_ERRORS as e:
                logger.warning("Cached output %s unreadable, rerunning %s: %s: %s", path, stage, type(e).__name__, e)
                return None
            if current != digest:
                logger.warning("Cached output %s changed on disk, rerunning %s", path, stage)
                return None
        return entry

    def save(self, entry: StageCacheEntry) -> None:
        stage_store.save(self._cache_dir, entry.key, entry)
