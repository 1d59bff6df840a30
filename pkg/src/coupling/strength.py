"""Single-photon coupling between the cavity and the gyrotropic mode."""

import logging
import math
from enum import StrEnum

from pydantic import BaseModel, ConfigDict, Field, computed_field

from cpw.uw_fit import UwFit
from physics.errors import DomainError
from physics.models import PHYSICAL

logger = logging.getLogger(__name__)

# Detuning, in units of g, at which the hybridization is considered switched off.
DEFAULT_DECOUPLING_FACTOR = 10.0


class Regime(StrEnum):
    STRONG = "strong"
    WEAK = "weak"


class CouplingInputs(BaseModel):

    model_config = ConfigDict(frozen=True)

    b_rms_x_at_rc: float = Field(..., gt=0, description="Single-photon field b_x at the disc centre, T")
    V: float = Field(..., gt=0, description="Mode volume, m³")
    chi_x: float = Field(..., gt=0, description="Resonant susceptibility, (A/m)/T")
    delta_f_G: float = Field(..., gt=0, description="Gyrotropic linewidth (FWHM), Hz")
    f_G: float = Field(..., gt=0, description="Gyrotropic frequency, Hz")


class CouplingReport(BaseModel):

    model_config = ConfigDict(frozen=True)

    g_angular: float = Field(..., ge=0, description="Coupling rate, rad/s")
    delta_f_G: float = Field(..., gt=0, description="Linewidth the strong-coupling ratio refers to, Hz")
    warnings: list[str] = Field(default_factory=list)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def g_hz(self) -> float:
        return self.g_angular / (2.0 * math.pi)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def strong_ratio(self) -> float:
        """4·g/(2π·Δf_G)."""
        return 4.0 * self.g_hz / self.delta_f_G

    @computed_field  # type: ignore[prop-decorator]
    @property
    def regime(self) -> Regime:
        return Regime.STRONG if self.strong_ratio > 1.0 else Regime.WEAK

    def to_text(self) -> str:
        lines = [
            f"g_rad_per_s = {self.g_angular!r}",
            f"g_Hz = {self.g_hz!r}",
            f"delta_f_G_Hz = {self.delta_f_G!r}",
            f"strong_ratio = {self.strong_ratio!r}",
            f"regime = {self.regime.value}",
        ]
        return "\n".join(lines + [f"warning = {w}" for w in self.warnings]) + "\n"


def coupling_exact(inputs: CouplingInputs) -> CouplingReport:
    """g = (b/2)·sqrt(V·χ_x·2πΔf_G/ħ), an angular rate."""
    angular_linewidth = 2.0 * math.pi * inputs.delta_f_G
    g = 0.5 * inputs.b_rms_x_at_rc * math.sqrt(inputs.V * inputs.chi_x * angular_linewidth / PHYSICAL.hbar)
    return CouplingReport(g_angular=g, delta_f_G=inputs.delta_f_G)


def response_amplitude(report: CouplingReport, inputs: CouplingInputs) -> float:
    """ΔM_x (A/m) from ħ·g = V·b·ΔM_x."""
    return PHYSICAL.hbar * report.g_angular / (inputs.V * inputs.b_rms_x_at_rc)


def coupling_approx(
    xi: float,
    f_G: float,
    Z0: float,
    r: float,
    uw: UwFit | float,
    *,
    delta_f_G: float,
) -> CouplingReport:
    """Closed form g ≅ (ξ/4)·sqrt(π·μ0·ω_G³/Z0)·r^{3/2}·u_w(r) with ω_G = 2π·f_G.

    ``uw`` is either a fit, evaluated at ``r`` with a warning outside its range,
    or the value u_w(r) itself in 1/m.
    """
    if min(xi, f_G, Z0, r, delta_f_G) <= 0:
        raise DomainError("xi, f_G, Z0, r and delta_f_G must be positive")
    warnings = []
    if isinstance(uw, UwFit):
        if not uw.covers(r):
            message = f"r = {r:.3e} m lies outside the u_w fit range {uw.fit_range[0]:.3e}–{uw.fit_range[1]:.3e} m"
            logger.warning(message)
            warnings.append(message)
        uw_value = uw.evaluate(r)
    else:
        uw_value = uw
    omega = 2.0 * math.pi * f_G
    g = 0.25 * xi * math.sqrt(math.pi * PHYSICAL.mu0 * omega**3 / Z0) * r**1.5 * uw_value
    return CouplingReport(g_angular=g, delta_f_G=delta_f_G, warnings=warnings)


def decoupling_field(g_hz: float, fG_slope: float, factor: float = DEFAULT_DECOUPLING_FACTOR) -> float:
    """Bias field |B_dc| (T) that detunes f_G by ``factor``·g from its zero-field value."""
    if fG_slope == 0:
        raise DomainError("f_G does not depend on B_dc; the coupling cannot be tuned off")
    return factor * g_hz / abs(fG_slope)
