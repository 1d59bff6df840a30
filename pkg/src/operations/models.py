from enum import StrEnum

from pydantic import BaseModel, ConfigDict, Field, SerializeAsAny

from coupling.strength import CouplingReport
from cpw.field import DiscCenterField
from cpw.uw_fit import UwFit


class StageName(StrEnum):
    RELAX = "relax"
    SPECTRUM = "spectrum"
    SUSCEPTIBILITY = "susceptibility"
    FIELD = "field"
    COUPLING = "coupling"
    TRANSMISSION = "transmission"


class StageStatus(StrEnum):
    OK = "ok"
    FAILED = "failed"
    SKIPPED = "skipped"
    CACHED = "cached"


class EstimateSource(StrEnum):
    MICROMAGNETIC = "micromagnetic"
    REFERENCE = "reference"
    ANALYTIC = "analytic"
    CONFIG = "config"


class RelaxOutcome(BaseModel):

    model_config = ConfigDict(frozen=True)

    polarity: int = Field(..., description="Relaxed core polarity")
    circulation: int = Field(..., description="Relaxed circulation")
    core_position: tuple[float, float] = Field(..., description="Core centre (x, y), m")
    core_radius_m: float = Field(..., description="Half-maximum core radius, m")
    steps: int = Field(..., description="LLG steps to convergence")
    residual_torque: float = Field(..., description="Max |m×H|/Ms at exit")

    def to_text(self) -> str:
        return (
            f"polarity = {self.polarity:+d}\n"
            f"circulation = {self.circulation:+d}\n"
            f"core_position_m = {self.core_position[0]!r}, {self.core_position[1]!r}\n"
            f"core_radius_m = {self.core_radius_m!r}\n"
            f"steps = {self.steps}\n"
            f"residual_torque = {self.residual_torque!r}\n"
        )


class ModeEstimate(BaseModel):
    """Gyrotropic frequency and linewidth handed to the coupling stages."""

    model_config = ConfigDict(frozen=True)

    f_G: float = Field(..., gt=0, description="Gyrotropic frequency, Hz")
    delta_f_G: float = Field(..., gt=0, description="Gyrotropic linewidth, Hz")
    f_G_uncertainty: float | None = Field(default=None, description="Frequency uncertainty, Hz")
    frequency_source: EstimateSource = Field(..., description="Where f_G came from")
    linewidth_source: EstimateSource = Field(..., description="Where Δf_G came from")
    warnings: list[str] = Field(default_factory=list)

    def to_text(self) -> str:
        lines = [
            f"f_G_Hz = {self.f_G!r}",
            f"f_G_uncertainty_Hz = {self.f_G_uncertainty!r}",
            f"delta_f_G_Hz = {self.delta_f_G!r}",
            f"frequency_source = {self.frequency_source.value}",
            f"linewidth_source = {self.linewidth_source.value}",
        ]
        return "\n".join(lines + [f"warning = {w}" for w in self.warnings]) + "\n"


class SusceptibilityEstimate(BaseModel):

    model_config = ConfigDict(frozen=True)

    chi_x: float = Field(..., gt=0, description="Resonant susceptibility, (A/m)/T")
    source: EstimateSource = Field(..., description="Driven micromagnetics or the closed form")
    analytic_chi_x: float = Field(..., gt=0, description="(γ/2π)·Ms·ξ²/Δf_G for comparison, (A/m)/T")
    warnings: list[str] = Field(default_factory=list)

    def to_text(self) -> str:
        lines = [
            f"chi_x_A_per_m_per_T = {self.chi_x!r}",
            f"source = {self.source.value}",
            f"analytic_chi_x_A_per_m_per_T = {self.analytic_chi_x!r}",
        ]
        return "\n".join(lines + [f"warning = {w}" for w in self.warnings]) + "\n"


class FieldOutcome(BaseModel):

    model_config = ConfigDict(frozen=True)

    f_cpw: float = Field(..., gt=0, description="Resonator frequency, Hz")
    kappa: float = Field(..., gt=0, description="Cavity leakage, Hz")
    center: DiscCenterField = Field(..., description="Single-photon field at the disc centre")
    uw: UwFit | None = Field(default=None, description="u_w(r) fit; None when the fit was refused")
    warnings: list[str] = Field(default_factory=list)


class CouplingOutcome(BaseModel):

    model_config = ConfigDict(frozen=True)

    exact: CouplingReport = Field(..., description="Coupling from field, volume and susceptibility")
    approx: CouplingReport = Field(..., description="Closed-form coupling from u_w")
    response_amplitude_a_per_m: float = Field(..., description="ΔM_x of one gyration quantum, A/m")

    def to_text(self) -> str:
        return (
            "[exact]\n" + self.exact.to_text()
            + "\n[approx]\n" + self.approx.to_text()
            + f"\nresponse_amplitude_A_per_m = {self.response_amplitude_a_per_m!r}\n"
        )


class TransmissionOutcome(BaseModel):

    model_config = ConfigDict(frozen=True)

    g_hz: float = Field(..., ge=0, description="Coupling used in the map, Hz")
    fg_slope_hz_per_t: float = Field(..., description="df_G/dB_dc, Hz/T")
    slope_source: EstimateSource = Field(..., description="Configured or estimated from Ms")
    resonant_field_t: float | None = Field(..., description="B_dc where f_G = f_cpw, T")
    resonant_peaks_hz: list[float] = Field(..., description="Transmission maxima at the resonant field, Hz")
    decoupling_field_t: float | None = Field(default=None, description="|B_dc| detuning f_G by 10 g, T")

    @property
    def splitting_hz(self) -> float | None:
        """Separation of the outermost peaks at the resonant field; None for a single peak."""
        if len(self.resonant_peaks_hz) < 2:
            return None
        return self.resonant_peaks_hz[-1] - self.resonant_peaks_hz[0]

    def to_text(self) -> str:
        lines = [
            f"g_Hz = {self.g_hz!r}",
            f"fg_slope_Hz_per_T = {self.fg_slope_hz_per_t!r}",
            f"slope_source = {self.slope_source.value}",
            f"resonant_field_T = {self.resonant_field_t!r}",
            f"resonant_peaks_Hz = {', '.join(repr(f) for f in self.resonant_peaks_hz)}",
            f"splitting_Hz = {self.splitting_hz!r}",
            f"decoupling_field_T = {self.decoupling_field_t!r}",
        ]
        return "\n".join(lines) + "\n"


class StageResult(BaseModel):
    """What a stage hands back to the pipeline: its payload, written files and findings."""

    model_config = ConfigDict(frozen=True)

    payload: SerializeAsAny[BaseModel] = Field(..., description="Typed stage outcome")
    mode: EstimateSource = Field(..., description="Micromagnetic or closed-form variant")
    outputs: dict[str, str] = Field(default_factory=dict, description="Output file → SHA-256")
    warnings: list[str] = Field(default_factory=list)


class StageRecord(BaseModel):

    name: StageName = Field(..., description="Stage")
    status: StageStatus = Field(..., description="Outcome of the stage in this run")
    mode: EstimateSource | None = Field(default=None, description="Micromagnetic or closed-form variant")
    inputs: dict[str, str] = Field(default_factory=dict, description="Upstream stage → output digest")
    outputs: dict[str, str] = Field(default_factory=dict, description="Output file → SHA-256")
    wall_seconds: float = Field(default=0.0, ge=0)
    warnings: list[str] = Field(default_factory=list)
    error: str | None = Field(default=None, description="Exception type and message of a failed stage")


class RunManifest(BaseModel):

    code_version: str = Field(..., description="Package version that produced the run")
    config_digest: str = Field(..., description="SHA-256 of the resolved configuration")
    target: StageName = Field(..., description="Last stage requested")
    stages: list[StageRecord] = Field(default_factory=list)

    @property
    def failed(self) -> bool:
        return any(record.status is StageStatus.FAILED for record in self.stages)

    def record(self, name: StageName) -> StageRecord | None:
        return next((record for record in self.stages if record.name is name), None)

    def to_json(self) -> str:
        return self.model_dump_json(indent=2) + "\n"
