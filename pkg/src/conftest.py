import math
import pathlib

import pytest

from coupling.strength import CouplingReport
from cpw.field import DiscCenterField
from operations.config import ExperimentConfig, parse_config
from operations.models import (
    CouplingOutcome,
    EstimateSource,
    FieldOutcome,
    ModeEstimate,
    RunManifest,
    StageName,
    StageRecord,
    StageStatus,
)
from operations.ports import ArtifactWriterPort, StageCachePort

# Closed-form run on the 200 nm reference disc; no micromagnetics.
ANALYTIC_OVERRIDES = ["stages.micromag=false", "transmission.b_dc_points=41", "transmission.f_points=201"]


def make_config(*overrides: str) -> ExperimentConfig:
    return parse_config("", [*ANALYTIC_OVERRIDES, *overrides])


def make_mode(f_G: float = 1.255e9, delta_f_G: float = 3.3e6) -> ModeEstimate:
    return ModeEstimate(
        f_G=f_G,
        delta_f_G=delta_f_G,
        frequency_source=EstimateSource.REFERENCE,
        linewidth_source=EstimateSource.REFERENCE,
    )


def make_field(f_cpw: float = 1.255e9, bx: float = 4e-9) -> FieldOutcome:
    center = DiscCenterField(bx=bx, by=0.0, current=1e-8, center=(0.0, 250e-9, 0.0))
    return FieldOutcome(f_cpw=f_cpw, kappa=f_cpw / 1e4, center=center)


def make_coupling(g_hz: float = 2e6, delta_f_G: float = 3.3e6) -> CouplingOutcome:
    report = CouplingReport(g_angular=2 * math.pi * g_hz, delta_f_G=delta_f_G)
    return CouplingOutcome(exact=report, approx=report, response_amplitude_a_per_m=1.0)


def make_manifest(*statuses: StageStatus) -> RunManifest:
    records = [
        StageRecord(name=name, status=status, mode=EstimateSource.ANALYTIC if status is StageStatus.OK else None)
        for name, status in zip(StageName, statuses)
    ]
    return RunManifest(code_version="0.1.0", config_digest="d" * 64, target=records[-1].name, stages=records)


@pytest.fixture
def analytic_config() -> ExperimentConfig:
    return make_config()


@pytest.fixture
def mock_writer(mocker):
    writer = mocker.Mock(spec=ArtifactWriterPort)
    writer.write_text.side_effect = lambda stage, name, content: f"sha-{stage}-{name}"
    writer.write_script.side_effect = lambda stage, name, content: f"sha-{stage}-{name}"
    return writer


@pytest.fixture
def mock_cache(mocker):
    cache = mocker.Mock(spec=StageCachePort)
    cache.load.return_value = None
    return cache


@pytest.fixture
def run_dir(tmp_path: pathlib.Path) -> pathlib.Path:
    return tmp_path / "run"
