import logging
import os

import numpy as np
import pytest

from constants import CACHE_VERSION
from micromag.grid import build_disc_grid, vortex_ansatz
from operations.adapters import FilesystemArtifactWriter, FilesystemStageCache
from operations.cache import StageCacheEntry
from operations.models import EstimateSource, StageName
from physics.materials import material_preset
from physics.models import DiscGeometry
from utils.fs import sha256_file


@pytest.fixture
def writer(run_dir):
    return FilesystemArtifactWriter(run_dir)


@pytest.fixture
def cache(run_dir):
    return FilesystemStageCache(run_dir)


def _entry(outputs: dict[str, str]) -> StageCacheEntry:
    return StageCacheEntry(
        key="k1",
        stage=StageName.FIELD,
        cache_version=CACHE_VERSION,
        mode=EstimateSource.ANALYTIC,
        payload={},
        outputs=outputs,
    )


class DescribeFilesystemArtifactWriter:

    def should_create_the_run_layout(self, writer, run_dir):
        assert (run_dir / "stages").is_dir()
        assert (run_dir / ".cache" / "version").read_text() == f"{CACHE_VERSION}\n"

    def should_place_outputs_under_their_stage(self, writer, run_dir):
        digest = writer.write_text(StageName.FIELD, "disc_center.txt", "bx_T = 1e-9\n")

        path = run_dir / "stages" / "field" / "disc_center.txt"
        assert path.read_text() == "bx_T = 1e-9\n"
        assert digest == sha256_file(path)

    def should_make_plot_scripts_executable(self, writer, run_dir):
        writer.write_script(StageName.TRANSMISSION, "plot_transmission.py", "print('hi')\n")

        assert os.access(run_dir / "stages" / "transmission" / "plot_transmission.py", os.X_OK)

    def should_write_run_files_at_the_root(self, writer, run_dir):
        writer.write_run_file("manifest.json", "{}\n")

        assert (run_dir / "manifest.json").read_text() == "{}\n"

    def should_read_back_a_snapshot(self, writer):
        cofe = material_preset("CoFe")
        grid = build_disc_grid(DiscGeometry(r=100e-9, t=15e-9), cofe, cells=(16, 16, 2))
        mag = vortex_ansatz(grid, cofe.Ms)

        writer.write_ovf(StageName.RELAX, "relaxed.ovf", mag, grid)
        restored, restored_grid = writer.read_ovf(StageName.RELAX, "relaxed.ovf", Ms=cofe.Ms)

        assert restored_grid.shape == grid.shape
        np.testing.assert_allclose(restored.m, mag.m, atol=1e-12)


class DescribeFilesystemStageCache:

    def should_hit_when_outputs_are_unchanged(self, writer, cache):
        digest = writer.write_text(StageName.FIELD, "uw_fit.txt", "a1 = 0.3\n")
        cache.save(_entry({"uw_fit.txt": digest}))

        assert cache.load(StageName.FIELD, "k1") == _entry({"uw_fit.txt": digest})

    def should_miss_for_another_stage(self, writer, cache):
        cache.save(_entry({}))

        assert cache.load(StageName.COUPLING, "k1") is None

    def should_miss_when_an_output_was_edited(self, writer, cache, run_dir, caplog):
        digest = writer.write_text(StageName.FIELD, "uw_fit.txt", "a1 = 0.3\n")
        cache.save(_entry({"uw_fit.txt": digest}))
        (run_dir / "stages" / "field" / "uw_fit.txt").write_text("a1 = 0.4\n")

        with caplog.at_level(logging.WARNING):
            assert cache.load(StageName.FIELD, "k1") is None

        assert "changed on disk" in caplog.text

    def should_miss_when_an_output_was_deleted(self, writer, cache, run_dir, caplog):
        digest = writer.write_text(StageName.FIELD, "uw_fit.txt", "a1 = 0.3\n")
        cache.save(_entry({"uw_fit.txt": digest}))
        (run_dir / "stages" / "field" / "uw_fit.txt").unlink()

        with caplog.at_level(logging.WARNING):
            assert cache.load(StageName.FIELD, "k1") is None

        assert "unreadable" in caplog.text
