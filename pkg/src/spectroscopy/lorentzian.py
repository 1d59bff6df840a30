"""Lorentzian line-shape fit of the gyrotropic peak."""

import logging
import math

import numpy as np
from lmfit.models import LorentzianModel
from pydantic import BaseModel, ConfigDict, Field

from constants import MIN_BINS_ACROSS_PEAK
from physics.errors import FitError, InsufficientResolutionError, NoPeakError
from spectroscopy.broadband import Spectrum

logger = logging.getLogger(__name__)

DEFAULT_MAX_FIT_RESIDUAL = 0.1


class GyroModeReport(BaseModel):
    """Gyrotropic mode parameters of one disc; linewidth and susceptibility are optional."""

    model_config = ConfigDict(frozen=True)

    f_G: float = Field(..., gt=0, description="Gyrotropic frequency, Hz")
    f_G_uncertainty: float = Field(..., gt=0, description="At least one frequency bin, Hz")
    delta_f_G: float | None = Field(default=None, gt=0, description="Lorentzian FWHM, Hz")
    chi_x: float | None = Field(default=None, gt=0, description="Resonant susceptibility, (A/m)/T")
    fit_amplitude: float = Field(default=0.0, description="Lorentzian area A, power·Hz")
    fit_residual: float = Field(default=0.0, ge=0, description="rms residual over peak height")
    alpha_v_implied: float | None = Field(default=None, description="Δf_G/(2 f_G)")
    linewidth_refused: str | None = Field(default=None, description="Why Δf_G is withheld")
    warnings: list[str] = Field(default_factory=list, description="Non-fatal findings")

    def with_susceptibility(self, chi_x: float) -> "GyroModeReport":
        return self.model_copy(update={"chi_x": chi_x})

    def to_text(self) -> str:
        lines = [
            f"f_G_Hz = {self.f_G!r}",
            f"f_G_uncertainty_Hz = {self.f_G_uncertainty!r}",
            f"delta_f_G_Hz = {self.delta_f_G!r}",
            f"chi_x_A_per_m_per_T = {self.chi_x!r}",
            f"alpha_v_implied = {self.alpha_v_implied!r}",
            f"fit_amplitude = {self.fit_amplitude!r}",
            f"fit_residual = {self.fit_residual!r}",
        ]
        if self.linewidth_refused:
            lines.append(f"linewidth_refused = {self.linewidth_refused}")
        lines += [f"warning = {w}" for w in self.warnings]
        return "\n".join(lines) + "\n"


def lorentzian(f: np.ndarray, amplitude: float, f_G: float, delta_f_G: float) -> np.ndarray:
    """L(f) = (A/π)·(Δf_G/2)/((f − f_G)² + (Δf_G/2)²)."""
    half = delta_f_G / 2
    return (amplitude / math.pi) * half / ((f - f_G) ** 2 + half**2)


def implied_vortex_damping(f_G: float, delta_f_G: float) -> float:
    """α_v from Δf_G = 2·α_v·f_G."""
    return delta_f_G / (2.0 * f_G)


def _interpolated_peak(freqs: np.ndarray, power: np.ndarray, index: int) -> float:
    """Parabolic interpolation of the log power around bin ``index``."""
    if index == 0 or index == freqs.size - 1:
        return float(freqs[index])
    a, b, c = np.log(np.maximum(power[index - 1:index + 2], np.finfo(float).tiny))
    denominator = a - 2 * b + c
    shift = 0.5 * (a - c) / denominator if denominator < 0 else 0.0
    return float(freqs[index] + shift * (freqs[1] - freqs[0]))


def lorentzian_fit(
    spectrum: Spectrum,
    window: tuple[float, float],
    *,
    require_linewidth: bool = True,
    min_bins: int = MIN_BINS_ACROSS_PEAK,
    max_residual: float = DEFAULT_MAX_FIT_RESIDUAL,
) -> GyroModeReport:
    """Fit the power spectrum inside ``window`` with the Lorentzian line shape.

    The linewidth is reported only when the peak spans ``min_bins`` bins and the
    trace is at least 4/Δf_G long. Otherwise InsufficientResolutionError is raised,
    or, with ``require_linewidth=False``, a frequency-only report is returned.
    """
    lo, hi = window
    inside = (spectrum.freqs >= lo) & (spectrum.freqs <= hi)
    freqs, power = spectrum.freqs[inside], spectrum.power[inside]
    if freqs.size < 3 or float(power.max(initial=0.0)) <= 0:
        raise NoPeakError(f"no spectral power between {lo:.4e} and {hi:.4e} Hz")
    peak_index = int(np.argmax(power))
    if peak_index in (0, freqs.size - 1):
        raise NoPeakError(f"power in [{lo:.4e}, {hi:.4e}] Hz rises to the window edge; no peak inside")

    resolution = spectrum.resolution
    uncertainty_floor = max(resolution, 1.0 / spectrum.duration)
    above_half = int(np.count_nonzero(power >= power[peak_index] / 2))

    if above_half < min_bins:
        reason = (
            f"peak spans {above_half} bins above half maximum, fewer than {min_bins}; "
            f"a trace longer than {min_bins / max(above_half, 1) * spectrum.duration:.3e} s is needed"
        )
        if require_linewidth:
            raise InsufficientResolutionError(reason)
        logger.debug("Frequency-only report: %s", reason)
        return GyroModeReport(
            f_G=_interpolated_peak(freqs, power, peak_index),
            f_G_uncertainty=uncertainty_floor,
            linewidth_refused=reason,
            warnings=list(spectrum.warnings),
        )

    model = LorentzianModel()
    params = model.guess(power, x=freqs)
    params["center"].set(value=float(freqs[peak_index]), min=lo, max=hi)
    result = model.fit(power, params, x=freqs)
    if not result.success:
        raise FitError(f"Lorentzian fit did not converge: {result.message}")

    f_G = float(result.params["center"].value)
    delta_f_G = 2.0 * float(result.params["sigma"].value)
    residual = float(np.sqrt(np.mean(result.residual**2)) / power[peak_index])
    if residual > max_residual:
        raise FitError(f"Lorentzian fit residual {residual:.3f} exceeds {max_residual}")

    stderr = result.params["center"].stderr
    uncertainty = max(float(stderr) if stderr is not None else 0.0, uncertainty_floor)
    warnings = list(spectrum.warnings)
    if spectrum.duration < 4.0 / delta_f_G:
        reason = f"trace of {spectrum.duration:.3e} s is shorter than 4/Δf_G = {4.0 / delta_f_G:.3e} s"
        if require_linewidth:
            raise InsufficientResolutionError(reason)
        return GyroModeReport(
            f_G=f_G, f_G_uncertainty=uncertainty, fit_residual=residual, linewidth_refused=reason, warnings=warnings
        )

    return GyroModeReport(
        f_G=f_G,
        f_G_uncertainty=uncertainty,
        delta_f_G=delta_f_G,
        fit_amplitude=float(result.params["amplitude"].value),
        fit_residual=residual,
        alpha_v_implied=implied_vortex_damping(f_G, delta_f_G),
        warnings=warnings,
    )
