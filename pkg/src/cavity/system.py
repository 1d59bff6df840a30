"""Cavity photon and gyrotropic mode as two coupled oscillators."""

import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field


class TwoModeSystem(BaseModel):
    """All rates are ordinary frequencies in Hz; linewidths are FWHM."""

    model_config = ConfigDict(frozen=True)

    f_cpw: float = Field(..., gt=0, description="Resonator frequency, Hz")
    f_G: float = Field(..., gt=0, description="Gyrotropic frequency, Hz")
    g_hz: float = Field(..., ge=0, description="Coupling g/2π, Hz")
    delta_f_G: float = Field(default=0.0, ge=0, description="Vortex linewidth, Hz")
    kappa: float = Field(default=0.0, ge=0, description="Cavity leakage, Hz")

    @property
    def detuning(self) -> float:
        """δ = f_G − f_cpw."""
        return self.f_G - self.f_cpw

    def with_f_G(self, f_G: float) -> "TwoModeSystem":
        return self.model_copy(update={"f_G": f_G})

    def with_coupling(self, g_hz: float) -> "TwoModeSystem":
        return self.model_copy(update={"g_hz": g_hz})


def rwa_eigenfrequencies(sys: TwoModeSystem) -> tuple[float, float]:
    """Single-excitation eigenfrequencies (f+, f−) of the rotating-wave Hamiltonian."""
    mean = 0.5 * (sys.f_cpw + sys.f_G)
    half_gap = math.sqrt(0.25 * sys.detuning**2 + sys.g_hz**2)
    return mean + half_gap, mean - half_gap


def dissipative_matrix(sys: TwoModeSystem) -> np.ndarray:
    """Single-excitation generator with each mode damped by half its linewidth, Hz."""
    return np.array(
        [
            [sys.f_cpw - 0.5j * sys.kappa, sys.g_hz],
            [sys.g_hz, sys.f_G - 0.5j * sys.delta_f_G],
        ]
    )


def normal_modes(sys: TwoModeSystem) -> tuple[complex, complex]:
    """Complex normal-mode frequencies, higher real part first; −2·Im is each mode's FWHM."""
    upper, lower = sorted(np.linalg.eigvals(dissipative_matrix(sys)), key=lambda z: z.real, reverse=True)
    return complex(upper), complex(lower)
