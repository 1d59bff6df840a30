"""Dependence of the gyrotropic frequency on the out-of-plane bias field."""

import logging

import numpy as np
from joblib import Parallel, delayed
from pydantic import BaseModel, ConfigDict, Field

from constants import (
    DEFAULT_DEMAG_NEAR_CELLS,
    DEFAULT_DT_S,
    DEFAULT_F_CUTOFF_HZ,
    DEFAULT_SAMPLE_DT_S,
    DEFAULT_SINC_AMPLITUDE_T,
    QUICK_DURATION_S,
)
from micromag.diagnostics import VortexState
from micromag.fields import FieldModel
from micromag.grid import build_disc_grid
from micromag.relax import RelaxSettings, relax
from physics.errors import DomainError
from physics.models import PHYSICAL, DiscGeometry, MaterialParams
from spectroscopy.broadband import broadband_spectrum, gyrotropic_peak
from spectroscopy.excitation import ExcitationKind, ExcitationSpec
from spectroscopy.lorentzian import lorentzian_fit

logger = logging.getLogger(__name__)

# Upper bound of the band searched for the gyrotropic peak; azimuthal modes sit above 10 GHz.
GYROTROPIC_SEARCH_MAX_HZ = 5e9


class SweepSettings(BaseModel):

    model_config = ConfigDict(frozen=True)

    sinc_amplitude: float = Field(default=DEFAULT_SINC_AMPLITUDE_T, gt=0, description="Sinc peak amplitude, T")
    f_cutoff: float = Field(default=DEFAULT_F_CUTOFF_HZ, gt=0, description="Sinc cutoff, Hz")
    delay: float | None = Field(default=None, ge=0, description="Sinc centre, s; None uses the excitation default")
    duration: float = Field(default=QUICK_DURATION_S, gt=0, description="Trace length per field point, s")
    sample_dt: float = Field(default=DEFAULT_SAMPLE_DT_S, gt=0, description="Sampling interval, s")
    dt: float = Field(default=DEFAULT_DT_S, gt=0, description="Integrator step, s")
    cells: tuple[int, int, int] | None = Field(default=None, description="Grid override")
    near_cells: int = Field(default=DEFAULT_DEMAG_NEAR_CELLS, gt=0, description="Newell near-field extent")
    relax: RelaxSettings = Field(default_factory=RelaxSettings, description="Relaxation settings per point")

    def excitation(self) -> ExcitationSpec:
        return ExcitationSpec(
            kind=ExcitationKind.SINC,
            amplitude=self.sinc_amplitude,
            duration=self.duration,
            sample_dt=self.sample_dt,
            f_cutoff=self.f_cutoff,
            delay=self.delay,
        )


class FieldSweepResult(BaseModel):

    model_config = ConfigDict(frozen=True)

    polarity: int = Field(..., description="Core polarity of the swept vortex")
    points: list[tuple[float, float]] = Field(..., description="(B_dc in T, f_G in Hz)")
    slope: float = Field(..., description="df_G/dB_dc, Hz/T")
    intercept: float = Field(..., description="Linear-fit f_G at B_dc = 0, Hz")
    max_residual_fraction: float = Field(..., description="max |f_G − fit|/f_G")

    def to_csv(self) -> str:
        rows = ["b_dc_T,f_G_Hz,polarity"]
        rows += [f"{b!r},{f!r},{self.polarity}" for b, f in self.points]
        return "\n".join(rows) + "\n"


def fit_field_dependence(b_dc: list[float], f_G: list[float]) -> tuple[float, float, float]:
    """Least-squares line f_G = slope·B_dc + intercept and the largest relative residual."""
    b = np.asarray(b_dc, dtype=float)
    f = np.asarray(f_G, dtype=float)
    if b.size < 2:
        return 0.0, float(f[0]) if f.size else 0.0, 0.0
    slope, intercept = np.polyfit(b, f, 1)
    residual = float(np.max(np.abs(f - (slope * b + intercept)) / f))
    return float(slope), float(intercept), residual


def analytic_field_slope(f_G: float, Ms: float, polarity: int) -> float:
    """df_G/dB_dc (Hz/T) of f_G(B) ≈ f_G(0)·(1 + P·B/(μ0·Ms)) below saturation."""
    if f_G <= 0 or Ms <= 0:
        raise DomainError("f_G and Ms must be positive")
    return polarity * f_G / (PHYSICAL.mu0 * Ms)


def gyrotropic_frequency_at(
    geom: DiscGeometry,
    material: MaterialParams,
    b_dc: float,
    polarity: int,
    settings: SweepSettings,
    circulation: int = 1,
) -> float:
    """Relax under ``b_dc`` and read f_G off a sinc spectrum; raises VortexLostError at that field."""
    grid = build_disc_grid(geom, material, settings.cells)
    model = FieldModel(grid, material, near_cells=settings.near_cells)
    relaxed = relax(
        grid,
        material,
        b_dc,
        VortexState(polarity=polarity, circulation=circulation),
        settings=settings.relax,
        field_model=model,
    )
    spectrum = broadband_spectrum(
        relaxed.magnetization, grid, material, settings.excitation(), b_dc=b_dc, field_model=model, dt=settings.dt
    )
    peak = gyrotropic_peak(spectrum, f_max=GYROTROPIC_SEARCH_MAX_HZ)
    report = lorentzian_fit(spectrum, (0.7 * peak, 1.3 * peak), require_linewidth=False)
    logger.debug("B_dc = %.4f T, P = %+d: f_G = %.6e Hz", b_dc, polarity, report.f_G)
    return report.f_G


def field_sweep_fG(
    geom: DiscGeometry,
    material: MaterialParams,
    b_dc_list: list[float],
    polarity: int,
    *,
    settings: SweepSettings | None = None,
    n_jobs: int = 1,
) -> FieldSweepResult:
    """f_G at every bias field, one independent micromagnetic run per point.

    Points run in parallel worker processes when ``n_jobs`` > 1. A field that no
    longer relaxes into the seeded vortex raises VortexLostError carrying that field.
    """
    settings = settings or SweepSettings()
    frequencies = Parallel(n_jobs=n_jobs)(
        delayed(gyrotropic_frequency_at)(geom, material, b, polarity, settings) for b in b_dc_list
    )
    slope, intercept, residual = fit_field_dependence(list(b_dc_list), list(frequencies))
    return FieldSweepResult(
        polarity=polarity,
        points=list(zip(b_dc_list, frequencies)),
        slope=slope,
        intercept=intercept,
        max_residual_fraction=residual,
    )
