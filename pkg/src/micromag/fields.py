"""Effective field assembly: exchange, demagnetization and Zeeman terms."""

import logging

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from constants import DEFAULT_DEMAG_NEAR_CELLS
from micromag.demag import DemagKernel
from micromag.exchange import exchange_field
from micromag.grid import MagGrid, Magnetization
from physics.models import PHYSICAL, MaterialParams

logger = logging.getLogger(__name__)


class EffectiveField(BaseModel):
    """Per-cell field terms, each shaped (nx, ny, nz, 3), A/m."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    H_exch: np.ndarray = Field(..., description="Exchange field, A/m")
    H_demag: np.ndarray = Field(..., description="Demagnetizing field, A/m")
    H_zeeman: np.ndarray = Field(..., description="Applied field B/μ0, A/m")

    @property
    def total(self) -> np.ndarray:
        return self.H_exch + self.H_demag + self.H_zeeman


def zeeman_field(grid: MagGrid, b_applied: np.ndarray | tuple[float, float, float]) -> np.ndarray:
    """H = B/μ0 on masked cells; ``b_applied`` is a uniform 3-vector or a per-cell array, T."""
    b = np.broadcast_to(np.asarray(b_applied, dtype=float), (*grid.shape, 3))
    return np.where(grid.mask[..., None], b / PHYSICAL.mu0, 0.0)


def demag_field(
    mag: Magnetization,
    grid: MagGrid,
    *,
    near_cells: int = DEFAULT_DEMAG_NEAR_CELLS,
    workers: int = 1,
) -> np.ndarray:
    """One-off demagnetizing field; repeated evaluation should hold a FieldModel instead."""
    kernel = DemagKernel(grid, near_cells=near_cells, workers=workers)
    return np.where(grid.mask[..., None], kernel.field(mag.Ms * mag.m), 0.0)


class FieldModel:
    """Effective-field evaluator bound to one grid and material; owns the demag kernel."""

    def __init__(
        self,
        grid: MagGrid,
        material: MaterialParams,
        *,
        near_cells: int = DEFAULT_DEMAG_NEAR_CELLS,
        workers: int = 1,
    ) -> None:
        self.grid = grid
        self.material = material
        self._kernel = DemagKernel(grid, near_cells=near_cells, workers=workers)
        logger.debug("Field model ready for %s grid, %d workers", grid.shape, workers)

    def terms(self, m: np.ndarray, b_applied: np.ndarray | tuple[float, float, float]) -> EffectiveField:
        grid = self.grid
        h_demag = np.where(grid.mask[..., None], self._kernel.field(self.material.Ms * m), 0.0)
        return EffectiveField(
            H_exch=exchange_field(m, grid, self.material),
            H_demag=h_demag,
            H_zeeman=zeeman_field(grid, b_applied),
        )

    def total(self, m: np.ndarray, b_applied: np.ndarray | tuple[float, float, float]) -> np.ndarray:
        return self.terms(m, b_applied).total
