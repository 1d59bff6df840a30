"""Supercurrent distribution across the thin superconducting constriction."""

import logging

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from constants import DEFAULT_FILAMENT_LAYERS
from physics.errors import DomainError
from physics.models import ResonatorSpec

logger = logging.getLogger(__name__)

STRIP_SAMPLES = 2000


class SheetCurrentDistribution(BaseModel):
    """Sheet current density j(x) across the strip, sampled at cell midpoints.

    The strip occupies |x| ≤ w/2 and −film_thickness ≤ y ≤ 0; the current flows along −z.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    x_samples: np.ndarray = Field(..., description="Midpoints across the strip width, m")
    j: np.ndarray = Field(..., description="Sheet current density at each midpoint, A/m")
    total_current: float = Field(..., ge=0, description="Integrated current, A")
    w: float = Field(..., gt=0, description="Strip width, m")
    pearl_length: float = Field(..., gt=0, description="Λ = λ_L²/film_thickness, m")
    film_thickness: float = Field(..., gt=0, description="Film thickness, m")
    layers: int = Field(default=DEFAULT_FILAMENT_LAYERS, gt=0, description="Filament layers across the thickness")
    uniform_fallback: bool = Field(default=False, description="True when Λ ≥ w/2 forced a uniform distribution")

    @property
    def dx(self) -> float:
        return self.w / self.x_samples.size

    def scaled(self, current: float) -> "SheetCurrentDistribution":
        """The same profile carrying ``current``."""
        factor = current / self.total_current if self.total_current else 0.0
        return self.model_copy(update={"j": self.j * factor, "total_current": current})


def edge_profile(x: np.ndarray, w: float, pearl_length: float) -> np.ndarray:
    """Unnormalized thin-strip profile 1/sqrt(1 − (2x/w)²), capped at its value Λ from either edge."""
    half = w / 2.0
    cap = 1.0 / np.sqrt(1.0 - ((half - pearl_length) / half) ** 2)
    inner = np.abs(x) < half - pearl_length
    profile = np.full_like(x, cap)
    profile[inner] = 1.0 / np.sqrt(1.0 - (x[inner] / half) ** 2)
    return profile


def strip_current_distribution(
    spec: ResonatorSpec,
    i: float,
    *,
    samples: int = STRIP_SAMPLES,
    layers: int = DEFAULT_FILAMENT_LAYERS,
) -> SheetCurrentDistribution:
    """Edge-peaked distribution of total current ``i`` across a strip of width ``spec.w``.

    Falls back to the uniform density i/w, flagged, when the Pearl length reaches half the width.
    """
    if i < 0:
        raise DomainError(f"current must be non-negative, got {i}")
    w = spec.w
    pearl = spec.pearl_length
    x = -w / 2.0 + (np.arange(samples) + 0.5) * (w / samples)

    fallback = pearl >= w / 2.0
    if fallback:
        logger.warning(
            "Pearl length %.3e m exceeds half the strip width %.3e m; using a uniform current distribution",
            pearl,
            w / 2.0,
        )
        profile = np.ones_like(x)
    else:
        profile = edge_profile(x, w, pearl)

    j = i * profile / (profile.sum() * (w / samples))
    return SheetCurrentDistribution(
        x_samples=x,
        j=j,
        total_current=i,
        w=w,
        pearl_length=pearl,
        film_thickness=spec.film_thickness,
        layers=layers,
        uniform_fallback=fallback,
    )
