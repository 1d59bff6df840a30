"""Sequential stage orchestration with digest-keyed reuse and a run manifest."""

import logging
import time
from importlib.metadata import PackageNotFoundError, version
from typing import Any, Final, TypeVar

from pydantic import BaseModel, ConfigDict, Field, SerializeAsAny

from constants import (
    CACHE_VERSION,
    EXIT_OK,
    FILESYSTEM_IO_ERRORS,
    NUMERICAL_ERRORS,
    VALIDATION_ERRORS,
    exit_code_for,
)
from operations import stages
from operations.cache import StageCacheEntry, build_stage_key, stage_digest
from operations.config import ExperimentConfig, section_payload, to_ini
from operations.models import (
    CouplingOutcome,
    FieldOutcome,
    ModeEstimate,
    RelaxOutcome,
    RunManifest,
    StageName,
    StageRecord,
    StageResult,
    StageStatus,
    SusceptibilityEstimate,
    TransmissionOutcome,
)
from operations.ports import ArtifactWriterPort, StageCachePort
from physics.errors import ConfigError
from utils.fs import sha256_json

logger = logging.getLogger(__name__)

P = TypeVar("P", bound=BaseModel)

STAGE_ORDER: Final[tuple[StageName, ...]] = tuple(StageName)

STAGE_DEPENDENCIES: Final[dict[StageName, tuple[StageName, ...]]] = {
    StageName.RELAX: (),
    StageName.SPECTRUM: (StageName.RELAX,),
    StageName.SUSCEPTIBILITY: (StageName.RELAX, StageName.SPECTRUM),
    StageName.FIELD: (StageName.SPECTRUM,),
    StageName.COUPLING: (StageName.SPECTRUM, StageName.SUSCEPTIBILITY, StageName.FIELD),
    StageName.TRANSMISSION: (StageName.SPECTRUM, StageName.COUPLING, StageName.FIELD),
}

# Config sections each stage reads; nothing outside them can change its outputs.
STAGE_SECTIONS: Final[dict[StageName, tuple[str, ...]]] = {
    StageName.RELAX: ("material", "disc", "numerics"),
    StageName.SPECTRUM: ("material", "disc", "numerics", "spectroscopy", "coupling", "stages"),
    StageName.SUSCEPTIBILITY: ("material", "disc", "resonator", "numerics", "spectroscopy", "coupling", "stages"),
    StageName.FIELD: ("disc", "resonator", "coupling"),
    StageName.COUPLING: ("material", "disc", "resonator", "coupling"),
    StageName.TRANSMISSION: ("material", "disc", "resonator", "numerics", "spectroscopy", "transmission", "stages"),
}

PAYLOAD_TYPES: Final[dict[StageName, type[BaseModel]]] = {
    StageName.RELAX: RelaxOutcome,
    StageName.SPECTRUM: ModeEstimate,
    StageName.SUSCEPTIBILITY: SusceptibilityEstimate,
    StageName.FIELD: FieldOutcome,
    StageName.COUPLING: CouplingOutcome,
    StageName.TRANSMISSION: TransmissionOutcome,
}

STAGE_ERRORS: Final[tuple[type[Exception], ...]] = (*VALIDATION_ERRORS, *NUMERICAL_ERRORS, *FILESYSTEM_IO_ERRORS)


class PipelineRun(BaseModel):
    """The manifest of a run together with the payload of every completed stage."""

    model_config = ConfigDict(frozen=True)

    manifest: RunManifest = Field(..., description="What ran, what was reused and what it wrote")
    payloads: dict[StageName, SerializeAsAny[BaseModel]] = Field(default_factory=dict)
    exit_code: int = Field(default=EXIT_OK, description="Exit code of the first failed stage, else 0")

    def payload(self, stage: StageName, payload_type: type[P]) -> P | None:
        found = self.payloads.get(stage)
        return found if isinstance(found, payload_type) else None


def code_version() -> str:
    try:
        return version("vortex-cavity")
    except PackageNotFoundError:
        return "unknown"


def stage_plan(config: ExperimentConfig, target: StageName) -> list[StageName]:
    """Stages up to ``target`` in order; relax drops out when micromagnetics is switched off."""
    plan = list(STAGE_ORDER[: STAGE_ORDER.index(target) + 1])
    if not config.stages.micromag:
        if target is StageName.RELAX:
            raise ConfigError("the relax stage needs stages.micromag = true")
        plan.remove(StageName.RELAX)
    return plan


def stage_config(config: ExperimentConfig, stage: StageName) -> dict[str, Any]:
    """The config subset a stage reads; the worker count never changes results."""
    subset = section_payload(config, *STAGE_SECTIONS[stage])
    if "numerics" in subset:
        subset["numerics"].pop("threads", None)
    return subset


def config_digest(config: ExperimentConfig) -> str:
    payload = config.model_dump(mode="json")
    payload["numerics"].pop("threads", None)
    return sha256_json(payload)


def _run_stage(
    stage: StageName,
    config: ExperimentConfig,
    writer: ArtifactWriterPort,
    payloads: dict[StageName, BaseModel],
) -> StageResult:
    # Looked up at call time so a single stage can be replaced.
    runner = getattr(stages, f"run_{stage.value}")
    result: StageResult = runner(config, writer, payloads)
    return result


def _cached_record(
    stage: StageName, entry: StageCacheEntry, inputs: dict[str, str]
) -> tuple[StageRecord, BaseModel]:
    payload = PAYLOAD_TYPES[stage].model_validate(entry.payload)
    record = StageRecord(
        name=stage,
        status=StageStatus.CACHED,
        mode=entry.mode,
        inputs=inputs,
        outputs=entry.outputs,
        warnings=entry.warnings,
    )
    return record, payload


def run_pipeline(
    config: ExperimentConfig,
    target: StageName,
    writer: ArtifactWriterPort,
    cache: StageCachePort,
) -> PipelineRun:
    """Run every stage up to ``target``, reusing cached stages whose inputs are unchanged.

    A failing stage is recorded with its error and every later stage is marked
    skipped. The resolved config and the manifest are written to the run root.
    """
    writer.write_run_file("config.ini", to_ini(config))
    payloads: dict[StageName, BaseModel] = {}
    digests: dict[StageName, str] = {}
    records: list[StageRecord] = []
    failed: StageName | None = None
    exit_code = EXIT_OK

    for stage in stage_plan(config, target):
        if failed is not None:
            records.append(
                StageRecord(name=stage, status=StageStatus.SKIPPED, warnings=[f"upstream stage {failed} failed"])
            )
            continue

        inputs = {dep.value: digests[dep] for dep in STAGE_DEPENDENCIES[stage] if dep in digests}
        key = build_stage_key(stage, stage_config(config, stage), inputs)
        entry = cache.load(stage, key)
        if entry is not None:
            logger.debug("Stage %s reused from cache", stage)
            record, payload = _cached_record(stage, entry, inputs)
        else:
            start = time.perf_counter()
            try:
                result = _run_stage(stage, config, writer, payloads)
            except STAGE_ERRORS as e:
                logger.warning("Stage %s failed: %s: %s", stage, type(e).__name__, e)
                records.append(
                    StageRecord(
                        name=stage,
                        status=StageStatus.FAILED,
                        inputs=inputs,
                        wall_seconds=time.perf_counter() - start,
                        error=f"{type(e).__name__}: {e}",
                    )
                )
                failed = stage
                exit_code = exit_code_for(e)
                continue
            payload = result.payload
            record = StageRecord(
                name=stage,
                status=StageStatus.OK,
                mode=result.mode,
                inputs=inputs,
                outputs=result.outputs,
                wall_seconds=time.perf_counter() - start,
                warnings=result.warnings,
            )
            cache.save(
                StageCacheEntry(
                    key=key,
                    stage=stage,
                    cache_version=CACHE_VERSION,
                    mode=result.mode,
                    payload=payload.model_dump(mode="json"),
                    outputs=result.outputs,
                    warnings=result.warnings,
                )
            )

        payloads[stage] = payload
        digests[stage] = stage_digest(payload.model_dump(mode="json"), record.outputs)
        records.append(record)

    manifest = RunManifest(
        code_version=code_version(), config_digest=config_digest(config), target=target, stages=records
    )
    writer.write_run_file("manifest.json", manifest.to_json())
    return PipelineRun(manifest=manifest, payloads=payloads, exit_code=exit_code)

