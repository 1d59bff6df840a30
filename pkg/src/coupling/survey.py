"""Coupling over families of discs, constriction widths and materials."""

import logging

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from constants import DEFAULT_FILAMENT_LAYERS, DEFAULT_XI
from coupling.linewidth import default_core_radius, linewidth_analytic
from coupling.strength import CouplingInputs, CouplingReport, Regime, coupling_approx, coupling_exact
from cpw.field import field_at_disc_center, uw_at
from physics.circuit import scaled_gyrotropic_frequency
from physics.errors import DomainError
from physics.materials import MATERIAL_PRESETS, REFERENCE_DISCS, material_preset, reference_disc
from physics.models import DiscGeometry, MaterialParams, ResonatorSpec
from spectroscopy.susceptibility import analytic_susceptibility

logger = logging.getLogger(__name__)

COMPARISON_DISC = DiscGeometry(r=400e-9, t=60e-9)
COMPARISON_WIDTH_M = 500e-9


class DiscMode(BaseModel):
    """A disc together with the gyrotropic mode it supports."""

    model_config = ConfigDict(frozen=True)

    geom: DiscGeometry = Field(..., description="Disc geometry and position")
    f_G: float = Field(..., gt=0, description="Gyrotropic frequency, Hz")
    delta_f_G: float = Field(..., gt=0, description="Gyrotropic linewidth, Hz")
    chi_x: float | None = Field(default=None, gt=0, description="Measured susceptibility, (A/m)/T")


def reference_modes() -> list[DiscMode]:
    """The micromagnetic reference discs with their tabulated frequencies and linewidths."""
    return [
        DiscMode(geom=DiscGeometry(r=disc.r, t=disc.t), f_G=disc.f_G, delta_f_G=disc.delta_f_G)
        for disc in REFERENCE_DISCS
    ]


def coupling_inputs_for_disc(
    b_rms_x: float,
    mode: DiscMode,
    material: MaterialParams,
    *,
    xi: float = DEFAULT_XI,
    volume_convention: str = "doubled",
) -> CouplingInputs:
    """Measured χ_x when the mode carries one, else the analytic (γ/2π)·Ms·ξ²/Δf_G."""
    chi = mode.chi_x
    if chi is None:
        chi = analytic_susceptibility(material.Ms, xi, mode.delta_f_G)
    return CouplingInputs(
        b_rms_x_at_rc=b_rms_x,
        V=mode.geom.volume(volume_convention),
        chi_x=chi,
        delta_f_G=mode.delta_f_G,
        f_G=mode.f_G,
    )


def resonant_spec(base: ResonatorSpec, mode: DiscMode, w: float) -> ResonatorSpec:
    """The resonator tuned onto the gyrotropic mode, narrowed to width ``w``."""
    return base.model_copy(update={"f_cpw": mode.f_G, "w": w})


def exact_coupling_for(
    mode: DiscMode,
    material: MaterialParams,
    spec: ResonatorSpec,
    *,
    xi: float = DEFAULT_XI,
    volume_convention: str = "doubled",
    layers: int = DEFAULT_FILAMENT_LAYERS,
) -> CouplingReport:
    b = field_at_disc_center(spec, mode.geom, layers=layers)
    return coupling_exact(
        coupling_inputs_for_disc(b, mode, material, xi=xi, volume_convention=volume_convention)
    )


class CouplingMap(BaseModel):
    """strong_ratio for every (disc, width) pair; rows follow ``modes``, columns ``widths``."""

    model_config = ConfigDict(frozen=True)

    modes: list[DiscMode] = Field(..., description="Discs, one row each")
    widths: list[float] = Field(..., description="Constriction widths, m")
    reports: list[list[CouplingReport]] = Field(..., description="Coupling per (disc, width)")

    @property
    def ratios(self) -> np.ndarray:
        return np.array([[report.strong_ratio for report in row] for row in self.reports])

    @property
    def regimes(self) -> list[list[Regime]]:
        return [[report.regime for report in row] for row in self.reports]

    def to_csv(self) -> str:
        rows = ["r_m,t_m,w_m,g_hz,delta_f_hz,strong_ratio,regime"]
        for mode, reports in zip(self.modes, self.reports):
            for w, report in zip(self.widths, reports):
                rows.append(
                    f"{mode.geom.r!r},{mode.geom.t!r},{w!r},{report.g_hz!r},"
                    f"{report.delta_f_G!r},{report.strong_ratio!r},{report.regime.value}"
                )
        return "\n".join(rows) + "\n"


def strong_coupling_map(
    modes: list[DiscMode],
    w_list: list[float],
    material: MaterialParams,
    *,
    base: ResonatorSpec,
    xi: float = DEFAULT_XI,
    volume_convention: str = "doubled",
    layers: int = DEFAULT_FILAMENT_LAYERS,
) -> CouplingMap:
    """Exact coupling of each disc on each constriction width, the resonator tuned to f_G."""
    widths = sorted(w_list)
    reports = [
        [
            exact_coupling_for(
                mode,
                material,
                resonant_spec(base, mode, w),
                xi=xi,
                volume_convention=volume_convention,
                layers=layers,
            )
            for w in widths
        ]
        for mode in modes
    ]
    for mode, row in zip(modes, reports):
        ratios = [report.strong_ratio for report in row]
        if any(later > earlier for earlier, later in zip(ratios, ratios[1:])):
            logger.warning("strong_ratio for r = %.3e m is not monotone in w: %s", mode.geom.r, ratios)
    return CouplingMap(modes=modes, widths=widths, reports=reports)


class MaterialRow(BaseModel):

    model_config = ConfigDict(frozen=True)

    material: MaterialParams = Field(..., description="Preset parameters")
    f_G: float = Field(..., description="Gyrotropic frequency on the comparison disc, Hz")
    delta_f_G: float = Field(..., description="Analytic linewidth, Hz")
    coupling: CouplingReport = Field(..., description="Closed-form coupling")

    def to_csv_row(self) -> str:
        m = self.material
        return (
            f"{m.name},{m.Ms!r},{m.alpha_llg!r},{m.exchange_length!r},{self.f_G!r},"
            f"{self.delta_f_G!r},{self.coupling.g_hz!r},{self.coupling.strong_ratio!r}"
        )


class MaterialTable(BaseModel):

    model_config = ConfigDict(frozen=True)

    disc: DiscGeometry = Field(..., description="Comparison disc")
    w: float = Field(..., description="Constriction width, m")
    rows: list[MaterialRow] = Field(..., description="One row per preset")

    def to_csv(self) -> str:
        header = "material,ms_a_per_m,alpha_llg,exchange_length_m,f_G_hz,delta_f_hz,g_hz,strong_ratio"
        return "\n".join([header] + [row.to_csv_row() for row in self.rows]) + "\n"

    def to_text(self) -> str:
        lines = [f"disc r = {self.disc.r!r} m, t = {self.disc.t!r} m, w = {self.w!r} m"]
        lines += [f"{row.material.name}: strong_ratio = {row.coupling.strong_ratio:.3g}" for row in self.rows]
        return "\n".join(lines) + "\n"


def material_comparison(
    presets: list[str] | None = None,
    *,
    base: ResonatorSpec,
    disc: DiscGeometry = COMPARISON_DISC,
    w: float = COMPARISON_WIDTH_M,
    xi: float = DEFAULT_XI,
    layers: int = DEFAULT_FILAMENT_LAYERS,
) -> MaterialTable:
    """Closed-form strong-coupling ratio of each preset on one disc and constriction.

    f_G comes from the CoFe reference disc of the same geometry scaled by Ms, and
    Δf_G from the analytic linewidth with the default core radius.
    """
    reference = reference_disc(disc.r, disc.t)
    if reference is None:
        raise DomainError(f"no reference disc with r = {disc.r:.3e} m, t = {disc.t:.3e} m")
    cofe = material_preset("CoFe")
    spec = base.with_width(w)
    uw = uw_at(spec, disc.r, standoff=disc.standoff, layers=layers)

    rows = []
    for name in presets or list(MATERIAL_PRESETS):
        material = material_preset(name)
        f_G = scaled_gyrotropic_frequency(reference.f_G, cofe.Ms, material.Ms)
        delta = linewidth_analytic(material, disc.r, default_core_radius(material), f_G)
        report = coupling_approx(xi, f_G, spec.Z0, disc.r, uw, delta_f_G=delta)
        rows.append(MaterialRow(material=material, f_G=f_G, delta_f_G=delta, coupling=report))
    return MaterialTable(disc=disc, w=w, rows=rows)
