"""Analytic gyrotropic linewidth from Gilbert damping and the core-to-disc size ratio."""

import math

from physics.errors import DomainError
from physics.models import MaterialParams


def default_core_radius(material: MaterialParams) -> float:
    """r_v = 2·l_ex, m."""
    return 2.0 * material.exchange_length


def geometric_factor(r: float, r_v: float) -> float:
    """φ = 1 + ½·ln(r/r_v)."""
    if r_v <= 0 or r <= r_v:
        raise DomainError(f"need 0 < r_v < r, got r = {r:.3e} m, r_v = {r_v:.3e} m")
    return 1.0 + 0.5 * math.log(r / r_v)


def vortex_damping(material: MaterialParams, r: float, r_v: float) -> float:
    """α_v = α_LLG·φ."""
    return material.alpha_llg * geometric_factor(r, r_v)


def linewidth_analytic(material: MaterialParams, r: float, r_v: float | None, f_G: float) -> float:
    """Δf_G = 2·α_v·f_G in Hz; ``r_v`` None uses the default core radius."""
    core = default_core_radius(material) if r_v is None else r_v
    return 2.0 * vortex_damping(material, r, core) * f_G
