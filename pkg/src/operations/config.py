"""Experiment configuration: sectioned INI text validated into frozen pydantic models."""

import configparser
import logging
from enum import StrEnum
from pathlib import Path
from typing import Annotated, Any, Literal

from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, field_validator, model_validator

from constants import (
    DEFAULT_DEMAG_NEAR_CELLS,
    DEFAULT_DRIVE_AMPLITUDE_T,
    DEFAULT_DT_S,
    DEFAULT_DURATION_S,
    DEFAULT_F_CUTOFF_HZ,
    DEFAULT_FILAMENT_LAYERS,
    DEFAULT_FILM_THICKNESS_M,
    DEFAULT_LAMBDA_L_M,
    DEFAULT_MAX_DRIVE_DURATION_S,
    DEFAULT_MAX_RELAX_STEPS,
    DEFAULT_RELAX_ALPHA,
    DEFAULT_SAMPLE_DT_S,
    DEFAULT_SINC_AMPLITUDE_T,
    DEFAULT_STANDOFF_M,
    DEFAULT_STEADY_TOLERANCE,
    DEFAULT_TORQUE_TOLERANCE,
    DEFAULT_XI,
    DEFAULT_Z0_OHM,
    QUICK_DURATION_S,
)
from cavity.transmission import TransmissionConvention
from micromag.relax import RelaxSettings
from physics.circuit import cavity_linewidth
from physics.errors import ConfigError
from physics.materials import DEFAULT_MATERIAL, material_preset
from physics.models import DiscGeometry, MaterialParams, ResonatorSpec
from spectroscopy.field_sweep import SweepSettings

logger = logging.getLogger(__name__)

DEFAULT_QUALITY_FACTOR = 1e4


def _split_list(value: Any) -> Any:
    if isinstance(value, str):
        return [item.strip() for item in value.split(",") if item.strip()]
    return value


FloatList = Annotated[list[float], BeforeValidator(_split_list)]


class _Section(BaseModel):
    """Blank INI values mean "not set"."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    @model_validator(mode="before")
    @classmethod
    def _blank_is_none(cls, data: Any) -> Any:
        if isinstance(data, dict):
            return {k: (None if isinstance(v, str) and not v.strip() else v) for k, v in data.items()}
        return data


class MaterialSection(_Section):

    preset: str | None = Field(default=DEFAULT_MATERIAL, description="Preset name; explicit keys override it")
    ms_a_per_m: float | None = Field(default=None, gt=0)
    aex_j_per_m: float | None = Field(default=None, gt=0)
    alpha_llg: float | None = Field(default=None, gt=0, lt=1)

    @model_validator(mode="after")
    def _check_complete(self) -> "MaterialSection":
        explicit = (self.ms_a_per_m, self.aex_j_per_m, self.alpha_llg)
        if self.preset is None and any(v is None for v in explicit):
            raise ValueError("without a preset, ms_a_per_m, aex_j_per_m and alpha_llg are all required")
        if self.preset is not None:
            try:
                material_preset(self.preset)
            except KeyError as e:
                raise ValueError(e.args[0]) from e
        return self

    def to_material(self) -> MaterialParams:
        overrides = {
            key: value
            for key, value in (("Ms", self.ms_a_per_m), ("Aex", self.aex_j_per_m), ("alpha_llg", self.alpha_llg))
            if value is not None
        }
        if self.preset is None:
            return MaterialParams(name="custom", **overrides)
        base = material_preset(self.preset)
        return base.model_copy(update=overrides) if overrides else base


class DiscSection(_Section):

    radius_m: float = Field(default=200e-9, gt=0)
    thickness_m: float = Field(default=30e-9, gt=0)
    standoff_m: float = Field(default=DEFAULT_STANDOFF_M, ge=0)
    polarity: int = Field(default=1)
    circulation: int = Field(default=1)

    @field_validator("polarity", "circulation")
    @classmethod
    def _unit_sign(cls, value: int) -> int:
        if value not in (1, -1):
            raise ValueError("must be +1 or -1")
        return value

    def to_geometry(self) -> DiscGeometry:
        return DiscGeometry(r=self.radius_m, t=self.thickness_m, standoff=self.standoff_m)


class ResonatorSection(_Section):

    f_cpw_hz: float | None = Field(default=None, gt=0, description="Blank tunes the resonator onto f_G")
    z0_ohm: float = Field(default=DEFAULT_Z0_OHM, gt=0)
    quality_factor: float = Field(default=DEFAULT_QUALITY_FACTOR, gt=0)
    width_m: float = Field(default=500e-9, gt=0)
    film_thickness_m: float = Field(default=DEFAULT_FILM_THICKNESS_M, gt=0)
    lambda_l_m: float = Field(default=DEFAULT_LAMBDA_L_M, gt=0)
    filament_layers: int = Field(default=DEFAULT_FILAMENT_LAYERS, gt=0)

    def to_spec(self, f_G: float) -> ResonatorSpec:
        """The resonator at f_cpw_hz, or at ``f_G`` when no frequency is configured."""
        f_cpw = self.f_cpw_hz if self.f_cpw_hz is not None else f_G
        return ResonatorSpec(
            f_cpw=f_cpw,
            Z0=self.z0_ohm,
            kappa=cavity_linewidth(f_cpw, self.quality_factor),
            w=self.width_m,
            film_thickness=self.film_thickness_m,
            lambda_L=self.lambda_l_m,
        )


class NumericsSection(_Section):

    dt_s: float = Field(default=DEFAULT_DT_S, gt=0)
    relax_alpha: float = Field(default=DEFAULT_RELAX_ALPHA, gt=0)
    torque_tolerance: float = Field(default=DEFAULT_TORQUE_TOLERANCE, gt=0)
    max_relax_steps: int = Field(default=DEFAULT_MAX_RELAX_STEPS, gt=0)
    cells: Annotated[tuple[int, int, int] | None, BeforeValidator(_split_list)] = Field(
        default=None, description="nx, ny, nz; blank picks the grid"
    )
    threads: int = Field(default=1, gt=0)
    demag_near_cells: int = Field(default=DEFAULT_DEMAG_NEAR_CELLS, gt=0)


class SpectroscopySection(_Section):

    sinc_amplitude_t: float = Field(default=DEFAULT_SINC_AMPLITUDE_T, gt=0)
    f_cutoff_hz: float = Field(default=DEFAULT_F_CUTOFF_HZ, gt=0)
    sinc_delay_s: float | None = Field(default=None, ge=0, description="Sinc centre; blank uses 0.5 ns")
    duration_s: float = Field(default=DEFAULT_DURATION_S, gt=0)
    quick_duration_s: float = Field(default=QUICK_DURATION_S, gt=0)
    sample_dt_s: float = Field(default=DEFAULT_SAMPLE_DT_S, gt=0)
    hann_window: bool = False
    linearity_check: bool = False
    field_sweep_t: FloatList = Field(default_factory=lambda: [-0.05, -0.025, 0.0, 0.025, 0.05])
    drive_amplitude_t: float = Field(default=DEFAULT_DRIVE_AMPLITUDE_T, gt=0)
    cpw_drive: bool = Field(default=True, description="Drive with the resonator field map instead of a uniform field")
    steady_tolerance: float = Field(default=DEFAULT_STEADY_TOLERANCE, gt=0)
    max_drive_duration_s: float = Field(default=DEFAULT_MAX_DRIVE_DURATION_S, gt=0)


class CouplingSection(_Section):

    xi: float = Field(default=DEFAULT_XI, gt=0, le=1)
    volume_convention: Literal["doubled", "geometric"] = "doubled"
    core_radius_m: float | None = Field(default=None, gt=0, description="Blank uses 2·exchange length")
    width_sweep_m: FloatList = Field(default_factory=lambda: [100e-9, 200e-9, 500e-9, 1e-6, 2e-6, 5e-6])
    radius_sweep_m: FloatList = Field(
        default_factory=lambda: [100e-9, 150e-9, 200e-9, 250e-9, 300e-9, 400e-9]
    )


class TransmissionSection(_Section):

    convention: TransmissionConvention = TransmissionConvention.HZ
    fg_slope_hz_per_t: float | None = Field(default=None, description="Blank estimates it from Ms")
    b_dc_span_t: float | None = Field(default=None, gt=0, description="Half span; blank spans ±8 g of detuning")
    b_dc_points: int = Field(default=201, ge=2)
    f_span_hz: float | None = Field(default=None, gt=0, description="Half span around f_cpw; blank picks 4·max rate")
    f_points: int = Field(default=801, ge=3)
    force_zero_coupling: bool = False


class StagesSection(_Section):

    micromag: bool = Field(default=True, description="False replaces micromagnetics by closed forms")


class ExperimentConfig(BaseModel):
    """Resolved configuration of one run."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    material: MaterialSection = Field(default_factory=MaterialSection)
    disc: DiscSection = Field(default_factory=DiscSection)
    resonator: ResonatorSection = Field(default_factory=ResonatorSection)
    numerics: NumericsSection = Field(default_factory=NumericsSection)
    spectroscopy: SpectroscopySection = Field(default_factory=SpectroscopySection)
    coupling: CouplingSection = Field(default_factory=CouplingSection)
    transmission: TransmissionSection = Field(default_factory=TransmissionSection)
    stages: StagesSection = Field(default_factory=StagesSection)

    @model_validator(mode="after")
    def _check_geometry(self) -> "ExperimentConfig":
        self.disc.to_geometry()
        return self

    def material_params(self) -> MaterialParams:
        return self.material.to_material()

    def geometry(self) -> DiscGeometry:
        return self.disc.to_geometry()

    def relax_settings(self) -> RelaxSettings:
        n = self.numerics
        return RelaxSettings(
            dt=n.dt_s, alpha=n.relax_alpha, torque_tolerance=n.torque_tolerance, max_steps=n.max_relax_steps
        )

    def sweep_settings(self) -> SweepSettings:
        s = self.spectroscopy
        return SweepSettings(
            sinc_amplitude=s.sinc_amplitude_t,
            f_cutoff=s.f_cutoff_hz,
            delay=s.sinc_delay_s,
            duration=s.quick_duration_s,
            sample_dt=s.sample_dt_s,
            dt=self.numerics.dt_s,
            cells=self.numerics.cells,
            near_cells=self.numerics.demag_near_cells,
            relax=self.relax_settings(),
        )


SECTION_NAMES: tuple[str, ...] = tuple(ExperimentConfig.model_fields)


def parse_override(override: str) -> tuple[str, str, str]:
    """Split ``section.key=value``."""
    target, sep, value = override.partition("=")
    section, dot, key = target.strip().partition(".")
    if not sep or not dot or not section or not key:
        raise ConfigError(f"override {override!r} is not of the form section.key=value")
    if section not in SECTION_NAMES:
        raise ConfigError(f"override {override!r} names unknown section {section!r}")
    return section, key.strip(), value.strip()


def _read_sections(text: str) -> dict[str, dict[str, str]]:
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str  # type: ignore[assignment,method-assign]
    try:
        parser.read_string(text)
    except configparser.Error as e:
        raise ConfigError(f"malformed configuration: {e}") from e
    if parser.defaults():
        raise ConfigError("a [DEFAULT] section is not supported")
    unknown = [s for s in parser.sections() if s not in SECTION_NAMES]
    if unknown:
        raise ConfigError(f"unknown section(s) {unknown}; expected {list(SECTION_NAMES)}")
    return {section: dict(parser.items(section)) for section in parser.sections()}


def parse_config(text: str, overrides: list[str] | None = None) -> ExperimentConfig:
    """Validate INI ``text`` with ``overrides`` applied first; raises ConfigError or ValidationError."""
    raw = _read_sections(text)
    for override in overrides or []:
        section, key, value = parse_override(override)
        raw.setdefault(section, {})[key] = value
        logger.debug("Override %s.%s = %s", section, key, value)
    return ExperimentConfig.model_validate(raw)


def with_quick_duration(config: ExperimentConfig) -> ExperimentConfig:
    """Shorten the spectroscopy trace to the quick duration."""
    spectroscopy = config.spectroscopy.model_copy(update={"duration_s": config.spectroscopy.quick_duration_s})
    return config.model_copy(update={"spectroscopy": spectroscopy})


def load_config(
    path: Path | None,
    overrides: list[str] | None = None,
    *,
    threads: int | None = None,
    quick: bool = False,
) -> ExperimentConfig:
    """Read, override and validate; ``threads`` and ``quick`` come from the command-line flags."""
    text = path.read_text(encoding="utf-8") if path is not None else ""
    extra = list(overrides or [])
    if threads is not None:
        extra.append(f"numerics.threads={threads}")
    config = parse_config(text, extra)
    return with_quick_duration(config) if quick else config


def _format_value(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, StrEnum):
        return value.value
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (list, tuple)):
        return ",".join(_format_value(item) for item in value)
    return str(value)


def to_ini(config: ExperimentConfig) -> str:
    """INI text that parses back to ``config``."""
    blocks = []
    for name in SECTION_NAMES:
        section: BaseModel = getattr(config, name)
        lines = [f"[{name}]"]
        lines += [f"{key} = {_format_value(getattr(section, key))}" for key in type(section).model_fields]
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"


def section_payload(config: ExperimentConfig, *names: str) -> dict[str, Any]:
    """JSON-ready dump of the named sections, used for cache keys."""
    return {name: getattr(config, name).model_dump(mode="json") for name in names}
