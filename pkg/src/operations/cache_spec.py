import json
import logging

import pytest

from constants import CACHE_VERSION
from operations.cache import CacheStore, StageCacheEntry, build_stage_key, stage_digest, stage_store
from operations.models import EstimateSource, StageName


def _entry(key: str = "k1") -> StageCacheEntry:
    return StageCacheEntry(
        key=key,
        stage=StageName.SPECTRUM,
        cache_version=CACHE_VERSION,
        mode=EstimateSource.REFERENCE,
        payload={"f_G": 1.255e9},
        outputs={"mode.txt": "abc"},
    )


@pytest.fixture
def cache_dir(tmp_path):
    return tmp_path / ".cache"


class DescribeBuildStageKey:

    def should_be_stable_for_equal_inputs(self):
        first = build_stage_key(StageName.FIELD, {"disc": {"radius_m": 2e-7}}, {"spectrum": "aa"})
        second = build_stage_key(StageName.FIELD, {"disc": {"radius_m": 2e-7}}, {"spectrum": "aa"})

        assert first == second

    def should_change_with_the_config(self):
        first = build_stage_key(StageName.FIELD, {"disc": {"radius_m": 2e-7}}, {})
        second = build_stage_key(StageName.FIELD, {"disc": {"radius_m": 4e-7}}, {})

        assert first != second

    def should_change_with_an_upstream_digest(self):
        first = build_stage_key(StageName.FIELD, {}, {"spectrum": "aa"})
        second = build_stage_key(StageName.FIELD, {}, {"spectrum": "bb"})

        assert first != second

    def should_change_with_the_stage(self):
        assert build_stage_key(StageName.FIELD, {}, {}) != build_stage_key(StageName.COUPLING, {}, {})


def should_digest_outputs_along_with_the_payload():
    assert stage_digest({"g": 1.0}, {"a.csv": "x"}) != stage_digest({"g": 1.0}, {"a.csv": "y"})


class DescribeCacheStore:

    def should_miss_when_no_file_exists(self, cache_dir):
        assert stage_store.load(cache_dir, "k1") is None

    def should_load_a_saved_entry(self, cache_dir):
        stage_store.save(cache_dir, "k1", _entry())

        assert stage_store.load(cache_dir, "k1") == _entry()

    def should_miss_when_the_recorded_key_differs(self, cache_dir):
        stage_store.save(cache_dir, "k1", _entry(key="other"))

        assert stage_store.load(cache_dir, "k1") is None

    def should_miss_on_another_cache_version(self, cache_dir):
        cache_dir.mkdir(parents=True)
        data = json.loads(_entry().model_dump_json())
        data["cache_version"] = CACHE_VERSION + 1
        (cache_dir / "k1.json").write_text(json.dumps(data))

        assert stage_store.load(cache_dir, "k1") is None

    def should_warn_and_miss_on_corrupt_json(self, cache_dir, caplog):
        cache_dir.mkdir(parents=True)
        (cache_dir / "k1.json").write_text("{not json")

        with caplog.at_level(logging.WARNING):
            assert stage_store.load(cache_dir, "k1") is None

        assert "Cache load failed" in caplog.text

    def should_log_rather_than_raise_when_saving_fails(self, tmp_path, caplog):
        blocker = tmp_path / "file"
        blocker.write_text("")

        with caplog.at_level(logging.WARNING):
            CacheStore(StageCacheEntry).save(blocker / "cache", "k1", _entry())

        assert "Cache save failed" in caplog.text
