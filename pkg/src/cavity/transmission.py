"""Input-output transmission of the resonator loaded by the vortex, and its DC-field map."""

import logging
from enum import StrEnum

import numpy as np
from numpy.typing import ArrayLike
from pydantic import BaseModel, ConfigDict, Field
from scipy.signal import find_peaks

from cavity.system import TwoModeSystem

logger = logging.getLogger(__name__)


class TransmissionConvention(StrEnum):
    """How the coupling enters the self-energy terms R and Γ.

    HZ uses g_hz², which puts the resonant peaks at f_cpw ± g_hz. PRINTED keeps the
    literal 2π·g_hz² reading and is only useful for comparing the two.
    """

    HZ = "hz"
    PRINTED = "printed"


def _self_energy_weight(g_hz: float, convention: TransmissionConvention) -> float:
    if convention is TransmissionConvention.PRINTED:
        return 2 * np.pi * g_hz**2
    return g_hz**2


def _transmission(f: np.ndarray, f_G: np.ndarray | float, sys: TwoModeSystem, weight: float) -> np.ndarray:
    half_kappa = 0.5 * sys.kappa
    if weight == 0.0:
        dispersive = np.zeros_like(f)
        broadening = np.full_like(f, half_kappa)
    else:
        detuning = f_G - f
        lorentz = detuning**2 + 0.25 * sys.delta_f_G**2
        with np.errstate(divide="ignore", invalid="ignore"):
            dispersive = weight * detuning / lorentz
            broadening = half_kappa + weight * 0.5 * sys.delta_f_G / lorentz
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.abs(half_kappa / ((f - sys.f_cpw) + dispersive + 1j * broadening))
    # An undamped vortex exactly on the drive frequency blocks transmission.
    return np.where(np.isfinite(t), t, 0.0)


def transmission(
    f: ArrayLike,
    sys: TwoModeSystem,
    convention: TransmissionConvention = TransmissionConvention.HZ,
) -> np.ndarray:
    """|T(f)| for drive frequencies ``f`` in Hz; bounded by 1 because Γ ≥ κ/2."""
    freqs = np.asarray(f, dtype=float)
    return _transmission(freqs, sys.f_G, sys, _self_energy_weight(sys.g_hz, convention))


def peak_frequencies(f_axis: np.ndarray, values: np.ndarray) -> list[float]:
    """Frequencies of the local maxima of a transmission trace, ascending."""
    indices, _ = find_peaks(values)
    return [float(f_axis[i]) for i in indices]


class TransmissionMap(BaseModel):
    """Transmission over a DC-field sweep; rows follow ``b_dc_axis``, columns ``f_axis``."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    f_axis: np.ndarray = Field(..., description="Drive frequencies, Hz")
    b_dc_axis: np.ndarray = Field(..., description="DC fields, T")
    values: np.ndarray = Field(..., description="|T|, shape (len(b_dc_axis), len(f_axis))")
    fG_slope: float = Field(..., description="df_G/dB_dc, Hz/T")
    fG_intercept: float = Field(..., description="f_G at zero DC field, Hz")
    f_cpw: float = Field(..., gt=0, description="Resonator frequency, Hz")

    def f_G(self, b_dc: float) -> float:
        return self.fG_intercept + self.fG_slope * b_dc

    @property
    def resonant_field(self) -> float | None:
        """DC field where f_G(B) crosses f_cpw; None without a field dependence."""
        if self.fG_slope == 0.0:
            return None
        return (self.f_cpw - self.fG_intercept) / self.fG_slope

    def trace_at(self, b_dc: float) -> np.ndarray:
        """Transmission trace at the sampled field nearest ``b_dc``."""
        return self.values[int(np.argmin(np.abs(self.b_dc_axis - b_dc)))]

    def to_csv(self) -> str:
        rows = ["b_dc_T,f_hz,transmission"]
        for b, trace in zip(self.b_dc_axis.tolist(), self.values):
            rows += [f"{b!r},{f!r},{t!r}" for f, t in zip(self.f_axis.tolist(), trace.tolist())]
        return "\n".join(rows) + "\n"


def transmission_map(
    sys: TwoModeSystem,
    b_dc_axis: ArrayLike,
    f_axis: ArrayLike,
    fG_slope: float,
    *,
    convention: TransmissionConvention = TransmissionConvention.HZ,
) -> TransmissionMap:
    """Sweep f_G(B) = sys.f_G + fG_slope·B through the resonator and evaluate T on every (B, f)."""
    fields = np.asarray(b_dc_axis, dtype=float)
    freqs = np.asarray(f_axis, dtype=float)
    f_G = (sys.f_G + fG_slope * fields)[:, np.newaxis]
    grid = np.broadcast_to(freqs, (fields.size, freqs.size))
    values = _transmission(grid, f_G, sys, _self_energy_weight(sys.g_hz, convention))
    logger.debug("Transmission map over %d fields and %d frequencies", fields.size, freqs.size)
    return TransmissionMap(
        f_axis=freqs,
        b_dc_axis=fields,
        values=values,
        fG_slope=fG_slope,
        fG_intercept=sys.f_G,
        f_cpw=sys.f_cpw,
    )
