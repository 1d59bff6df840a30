import math
from typing import Self

from pydantic import BaseModel, ConfigDict, Field, model_validator

from constants import (
    DEFAULT_FILM_THICKNESS_M,
    DEFAULT_LAMBDA_L_M,
    DEFAULT_STANDOFF_M,
    DEFAULT_Z0_OHM,
    GAMMA_OVER_2PI,
    HBAR,
    MU0,
)

Vector3 = tuple[float, float, float]


class PhysicalConstants(BaseModel):
    """Fundamental constants shared by every calculation."""

    model_config = ConfigDict(frozen=True)

    hbar: float = Field(default=HBAR, gt=0, description="Reduced Planck constant, J·s")
    mu0: float = Field(default=MU0, gt=0, description="Vacuum permeability, T·m/A")
    gamma_over_2pi: float = Field(
        default=GAMMA_OVER_2PI, gt=0, description="Electron gyromagnetic ratio over 2π, Hz/T"
    )

    @property
    def gamma(self) -> float:
        """Gyromagnetic ratio in rad/(s·T)."""
        return 2.0 * math.pi * self.gamma_over_2pi


PHYSICAL = PhysicalConstants()


class MaterialParams(BaseModel):
    """Magnetic parameters of a disc material."""

    model_config = ConfigDict(frozen=True)

    name: str = Field(default="custom", description="Material label")
    Ms: float = Field(..., gt=0, description="Saturation magnetization, A/m")
    Aex: float = Field(..., gt=0, description="Exchange stiffness, J/m")
    alpha_llg: float = Field(..., gt=0, lt=1, description="Gilbert damping, dimensionless")

    @property
    def exchange_length(self) -> float:
        """sqrt(2·Aex/(μ0·Ms²)) in metres."""
        return math.sqrt(2.0 * self.Aex / (PHYSICAL.mu0 * self.Ms**2))


class DiscGeometry(BaseModel):
    """A magnetic disc sitting above the constriction, its centre in the strip cross-section plane."""

    model_config = ConfigDict(frozen=True)

    r: float = Field(..., gt=0, description="Disc radius, m")
    t: float = Field(..., gt=0, description="Disc thickness, m")
    standoff: float = Field(
        default=DEFAULT_STANDOFF_M, ge=0, description="Gap between disc bottom edge and conductor top, m"
    )
    center: Vector3 = Field(
        default_factory=lambda data: (0.0, data.get("standoff", 0.0) + data.get("r", 0.0), 0.0),
        description="Disc centre r_c, m; defaults to (0, standoff + r, 0)",
    )

    @model_validator(mode="after")
    def _check_aspect(self) -> Self:
        if self.t / self.r >= 1.0:
            raise ValueError(f"aspect ratio t/r = {self.t / self.r:.3f} must be below 1 for a vortex ground state")
        return self

    def volume(self, convention: str = "doubled") -> float:
        """Mode volume: 2πr²t for the "doubled" convention, the geometric πr²t for "geometric"."""
        geometric = math.pi * self.r**2 * self.t
        if convention == "geometric":
            return geometric
        if convention == "doubled":
            return 2.0 * geometric
        raise ValueError(f"Unknown volume convention: {convention!r}")


class ResonatorSpec(BaseModel):
    """Coplanar waveguide resonator and the superconducting strip at its constriction."""

    model_config = ConfigDict(frozen=True)

    f_cpw: float = Field(..., gt=0, description="Resonator frequency, Hz")
    Z0: float = Field(default=DEFAULT_Z0_OHM, gt=0, description="Characteristic impedance, Ω")
    kappa: float = Field(..., gt=0, description="Cavity leakage, Hz")
    w: float = Field(..., gt=0, description="Central conductor (constriction) width, m")
    film_thickness: float = Field(default=DEFAULT_FILM_THICKNESS_M, gt=0, description="Superconducting film, m")
    lambda_L: float = Field(default=DEFAULT_LAMBDA_L_M, gt=0, description="London penetration depth, m")

    @property
    def pearl_length(self) -> float:
        """Λ = λ_L²/film_thickness."""
        return self.lambda_L**2 / self.film_thickness

    def with_width(self, w: float) -> "ResonatorSpec":
        return self.model_copy(update={"w": w})
