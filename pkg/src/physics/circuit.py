"""Closed-form lumped relations of the resonator and the small-aspect-ratio vortex disc."""

import math

from physics.errors import DomainError
from physics.models import PHYSICAL


def i_rms(f_cpw: float, Z0: float) -> float:
    """Zero-point rms current 2π·f_cpw·sqrt(ħπ/(2·Z0)), in amperes."""
    if Z0 <= 0:
        raise DomainError(f"Z0 must be positive, got {Z0}")
    if f_cpw < 0:
        raise DomainError(f"f_cpw must be non-negative, got {f_cpw}")
    return 2.0 * math.pi * f_cpw * math.sqrt(PHYSICAL.hbar * math.pi / (2.0 * Z0))


def resonator_inductance(f_cpw: float, Z0: float) -> float:
    """L = Z0/(π²·f_cpw); satisfies ħπf = L·i_rms²/2."""
    if f_cpw <= 0:
        raise DomainError(f"f_cpw must be positive, got {f_cpw}")
    if Z0 <= 0:
        raise DomainError(f"Z0 must be positive, got {Z0}")
    return Z0 / (math.pi**2 * f_cpw)


def cavity_linewidth(f_cpw: float, quality_factor: float) -> float:
    """κ = f_cpw/Q in Hz."""
    if f_cpw <= 0 or quality_factor <= 0:
        raise DomainError("f_cpw and Q must be positive")
    return f_cpw / quality_factor


def _require_positive(**values: float) -> None:
    for name, value in values.items():
        if value <= 0:
            raise DomainError(f"{name} must be positive, got {value}")


def thickness_from_frequency(r: float, f_G: float, Ms: float) -> float:
    """t = (9/10)·r·(2π f_G)/((γ/2π)·μ0·Ms), valid for t/r ≪ 1."""
    _require_positive(r=r, f_G=f_G, Ms=Ms)
    return 0.9 * r * (2.0 * math.pi * f_G) / (PHYSICAL.gamma_over_2pi * PHYSICAL.mu0 * Ms)


def frequency_from_thickness(r: float, t: float, Ms: float) -> float:
    """Inverse of thickness_from_frequency: f_G = (10/9)·t·(γ/2π)·μ0·Ms/(2π·r)."""
    _require_positive(r=r, t=t, Ms=Ms)
    return t * PHYSICAL.gamma_over_2pi * PHYSICAL.mu0 * Ms / (0.9 * 2.0 * math.pi * r)


def scaled_gyrotropic_frequency(reference_f_G: float, reference_Ms: float, Ms: float) -> float:
    """Gyrotropic frequency of another material on the same disc; f_G ∝ Ms at fixed t/r."""
    _require_positive(reference_f_G=reference_f_G, reference_Ms=reference_Ms, Ms=Ms)
    return reference_f_G * Ms / reference_Ms
