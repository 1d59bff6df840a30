from typing import Protocol

from micromag.grid import MagGrid, Magnetization
from operations.cache import StageCacheEntry
from operations.models import StageName


class ArtifactWriterPort(Protocol):

    def write_text(self, stage: StageName, name: str, content: str) -> str:
        """Write a stage output file once, atomically; returns its SHA-256."""
        ...

    def write_script(self, stage: StageName, name: str, content: str) -> str:
        """Write an executable plot script next to the stage CSVs; returns its SHA-256."""
        ...

    def write_ovf(self, stage: StageName, name: str, mag: Magnetization, grid: MagGrid) -> str:
        """Write an OVF 2.0 snapshot; returns its SHA-256."""
        ...

    def read_ovf(self, stage: StageName, name: str, *, Ms: float) -> tuple[Magnetization, MagGrid]:
        """Read a snapshot an upstream stage wrote."""
        ...

    def write_run_file(self, name: str, content: str) -> None:
        """Write a file at the run-directory root (manifest, resolved config)."""
        ...


class StageCachePort(Protocol):

    def load(self, stage: StageName, key: str) -> StageCacheEntry | None:
        """Return the entry for ``key`` only if every output it lists is still on disk unchanged."""
        ...

    def save(self, entry: StageCacheEntry) -> None:
        ...
