"""Broadband sinc-pulse spectroscopy of the relaxed vortex."""

import logging

import numpy as np
import scipy.fft
from pydantic import BaseModel, ConfigDict, Field
from scipy.signal import find_peaks

from constants import DEFAULT_DT_S
from micromag.fields import FieldModel
from micromag.grid import MagGrid, Magnetization
from physics.errors import NoPeakError
from physics.models import MaterialParams
from spectroscopy.excitation import ExcitationKind, ExcitationSpec, TimeSeries, run_excitation

logger = logging.getLogger(__name__)

# Peak |ΔM_x|/Ms above which the response is no longer treated as linear.
LINEAR_RESPONSE_LIMIT = 0.05
# Allowed deviation of the 2× amplitude response ratio from 2.
LINEARITY_TOLERANCE = 0.05


class Spectrum(BaseModel):

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    freqs: np.ndarray = Field(..., description="Bin frequencies, Hz")
    amplitude: np.ndarray = Field(..., description="|FFT(⟨M_x⟩ − ⟨M_x⟩(0))|")
    duration: float = Field(..., gt=0, description="Trace length the spectrum was computed from, s")
    nonlinear: bool = Field(default=False, description="Response failed the linearity checks")
    warnings: list[str] = Field(default_factory=list, description="Non-fatal findings")

    @property
    def power(self) -> np.ndarray:
        return self.amplitude**2

    @property
    def resolution(self) -> float:
        return float(self.freqs[1] - self.freqs[0])

    def to_csv(self) -> str:
        rows = ["freq_Hz,amplitude,power"]
        columns = zip(self.freqs.tolist(), self.amplitude.tolist(), self.power.tolist())
        rows += [f"{f!r},{a!r},{p!r}" for f, a, p in columns]
        return "\n".join(rows) + "\n"


def spectrum_from_series(series: TimeSeries, *, hann: bool = False) -> Spectrum:
    """FFT magnitude of the response relative to τ = 0, up to (excluding) Nyquist."""
    response = series.mx_avg - series.mx_avg[0]
    if hann:
        response = response * np.hanning(response.size)
    n = response.size
    amplitude = np.abs(scipy.fft.rfft(response))[: n // 2]
    freqs = scipy.fft.rfftfreq(n, series.sample_dt)[: n // 2]
    return Spectrum(freqs=freqs, amplitude=amplitude, duration=series.sample_dt * n)


def _peak_response(series: TimeSeries) -> float:
    return float(np.abs(series.mx_avg - series.mx_avg[0]).max())


def broadband_spectrum(
    state: Magnetization,
    grid: MagGrid,
    material: MaterialParams,
    exc: ExcitationSpec,
    *,
    b_dc: float = 0.0,
    field_model: FieldModel | None = None,
    dt: float = DEFAULT_DT_S,
    hann: bool = False,
    linearity_check: bool = False,
) -> Spectrum:
    """Sinc-drive spectrum; the lowest strong peak is the gyrotropic mode.

    Nonlinearity is flagged, never fatal: a peak response above 5% of Ms, or a
    response that does not double when ``linearity_check`` doubles the drive.
    """
    if exc.kind is not ExcitationKind.SINC:
        raise ValueError("broadband spectroscopy needs a sinc excitation")
    model = field_model or FieldModel(grid, material)
    series = run_excitation(state, grid, material, exc, b_dc=b_dc, field_model=model, dt=dt)
    spectrum = spectrum_from_series(series, hann=hann)

    warnings: list[str] = []
    peak = _peak_response(series)
    if peak > LINEAR_RESPONSE_LIMIT * state.Ms:
        warnings.append(f"peak response |ΔM_x|/Ms = {peak / state.Ms:.3f} exceeds {LINEAR_RESPONSE_LIMIT}")
    if linearity_check and peak > 0:
        doubled = run_excitation(
            state, grid, material, exc.with_amplitude(2 * exc.amplitude), b_dc=b_dc, field_model=model, dt=dt
        )
        ratio = _peak_response(doubled) / peak
        if abs(ratio - 2.0) > 2.0 * LINEARITY_TOLERANCE:
            warnings.append(f"response grew {ratio:.3f}× for a 2× drive")
    for warning in warnings:
        logger.warning("Nonlinear response: %s", warning)
    return spectrum.model_copy(update={"nonlinear": bool(warnings), "warnings": warnings})


def find_mode_peaks(spectrum: Spectrum, *, min_relative_height: float = 0.1) -> np.ndarray:
    """Frequencies of local power maxima above a fraction of the strongest one, ascending."""
    power = spectrum.power
    top = float(power.max()) if power.size else 0.0
    if top <= 0:
        return np.empty(0)
    indices, _ = find_peaks(power, height=min_relative_height * top)
    return spectrum.freqs[indices]


def gyrotropic_peak(spectrum: Spectrum, *, f_max: float | None = None) -> float:
    """Lowest-frequency strong peak below ``f_max``; raises NoPeakError when there is none."""
    peaks = find_mode_peaks(spectrum)
    if f_max is not None:
        peaks = peaks[peaks <= f_max]
    if peaks.size == 0:
        raise NoPeakError("spectrum has no resolvable peak")
    return float(peaks[0])
