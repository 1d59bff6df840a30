import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from micromag.fields import EffectiveField, FieldModel
from micromag.grid import MagGrid, Magnetization
from physics.models import PHYSICAL, MaterialParams


class EnergyBreakdown(BaseModel):

    model_config = ConfigDict(frozen=True)

    exchange: float = Field(..., description="Exchange energy, J")
    demag: float = Field(..., description="Magnetostatic self-energy, J")
    zeeman: float = Field(..., description="Zeeman energy, J")

    @property
    def total(self) -> float:
        return self.exchange + self.demag + self.zeeman


def energy_from_field(mag: Magnetization, grid: MagGrid, field: EffectiveField) -> EnergyBreakdown:
    """Self-interaction terms carry −μ0Ms/2·m·H per unit volume; Zeeman carries −μ0Ms·m·H."""
    scale = PHYSICAL.mu0 * mag.Ms * grid.cell_volume

    def _dot(h: np.ndarray) -> float:
        return float(np.sum(mag.m * h))

    return EnergyBreakdown(
        exchange=-0.5 * scale * _dot(field.H_exch),
        demag=-0.5 * scale * _dot(field.H_demag),
        zeeman=-scale * _dot(field.H_zeeman),
    )


def total_energy(
    mag: Magnetization,
    grid: MagGrid,
    material: MaterialParams,
    b_applied: tuple[float, float, float] = (0.0, 0.0, 0.0),
    *,
    field_model: FieldModel | None = None,
) -> EnergyBreakdown:
    model = field_model if field_model is not None else FieldModel(grid, material)
    return energy_from_field(mag, grid, model.terms(mag.m, b_applied))
