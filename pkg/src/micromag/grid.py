"""Finite-difference discretisation of the disc and the magnetization living on it."""

import logging
import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from constants import REFERENCE_CELL_XY_M, REFERENCE_CELL_Z_M
from physics.errors import DomainError
from physics.materials import reference_disc
from physics.models import DiscGeometry, MaterialParams

logger = logging.getLogger(__name__)


class MagGrid(BaseModel):

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    nx: int = Field(..., gt=0, description="Cells along x")
    ny: int = Field(..., gt=0, description="Cells along y")
    nz: int = Field(..., gt=0, description="Cells along z")
    dx: float = Field(..., gt=0, description="Cell edge along x, m")
    dy: float = Field(..., gt=0, description="Cell edge along y, m")
    dz: float = Field(..., gt=0, description="Cell edge along z, m")
    mask: np.ndarray = Field(..., description="Boolean (nx, ny, nz) inside-body flags")
    origin: tuple[float, float, float] = Field(default=(0.0, 0.0, 0.0), description="Lower box corner, m")
    periodic: tuple[bool, bool, bool] = Field(
        default=(False, False, False), description="Periodic axes of the exchange stencil"
    )

    @property
    def shape(self) -> tuple[int, int, int]:
        return (self.nx, self.ny, self.nz)

    @property
    def cell_sizes(self) -> tuple[float, float, float]:
        return (self.dx, self.dy, self.dz)

    @property
    def cell_volume(self) -> float:
        return self.dx * self.dy * self.dz

    @property
    def n_active(self) -> int:
        return int(self.mask.sum())

    def cell_centers(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """1-D arrays of cell-centre coordinates along x, y and z."""
        x = self.origin[0] + (np.arange(self.nx) + 0.5) * self.dx
        y = self.origin[1] + (np.arange(self.ny) + 0.5) * self.dy
        z = self.origin[2] + (np.arange(self.nz) + 0.5) * self.dz
        return x, y, z


def box_grid(
    shape: tuple[int, int, int],
    cell: tuple[float, float, float],
    *,
    periodic: tuple[bool, bool, bool] = (False, False, False),
) -> MagGrid:
    """Fully occupied rectangular grid, origin at the box centre."""
    nx, ny, nz = shape
    dx, dy, dz = cell
    return MagGrid(
        nx=nx, ny=ny, nz=nz, dx=dx, dy=dy, dz=dz,
        mask=np.ones(shape, dtype=bool),
        origin=(-nx * dx / 2, -ny * dy / 2, -nz * dz / 2),
        periodic=periodic,
    )


def _power_of_two_cells(length: float, target_cell: float) -> int:
    return max(1, 2 ** round(math.log2(max(length / target_cell, 1.0))))


def build_disc_grid(
    geom: DiscGeometry,
    material: MaterialParams,
    cells: tuple[int, int, int] | None = None,
) -> MagGrid:
    """Discretise the 2r × 2r × t box holding the disc.

    Cell counts come from ``cells`` when given, from the reference disc table for
    the reference geometries, and otherwise from the nearest power of two giving
    cells close to 3.125 × 3.125 × 1.875 nm³.
    """
    if cells is None:
        known = reference_disc(geom.r, geom.t)
        if known is not None:
            cells = known.cells
        else:
            n_xy = _power_of_two_cells(2 * geom.r, REFERENCE_CELL_XY_M)
            cells = (n_xy, n_xy, _power_of_two_cells(geom.t, REFERENCE_CELL_Z_M))
    nx, ny, nz = cells
    dx, dy, dz = 2 * geom.r / nx, 2 * geom.r / ny, geom.t / nz

    limit = 2 * material.exchange_length
    if max(dx, dy, dz) >= limit:
        raise DomainError(
            f"cell {dx * 1e9:.2f}×{dy * 1e9:.2f}×{dz * 1e9:.2f} nm³ is too coarse: edges must stay below "
            f"2·exchange_length = {limit * 1e9:.2f} nm for {material.name}"
        )

    x = -geom.r + (np.arange(nx) + 0.5) * dx
    y = -geom.r + (np.arange(ny) + 0.5) * dy
    inside = (x[:, None] ** 2 + y[None, :] ** 2) <= geom.r**2
    mask = np.repeat(inside[:, :, None], nz, axis=2)
    logger.debug("Disc grid %dx%dx%d, %d active cells", nx, ny, nz, int(mask.sum()))
    return MagGrid(nx=nx, ny=ny, nz=nz, dx=dx, dy=dy, dz=dz, mask=mask, origin=(-geom.r, -geom.r, -geom.t / 2))


class Magnetization(BaseModel):
    """Unit-vector field on a grid; cells outside the mask hold zero vectors."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    m: np.ndarray = Field(..., description="(nx, ny, nz, 3) unit directions")
    Ms: float = Field(..., gt=0, description="Saturation magnetization, A/m")

    def average(self, grid: MagGrid) -> np.ndarray:
        """Spatially averaged magnetization ⟨M⟩ over masked cells, A/m."""
        return self.Ms * self.m[grid.mask].mean(axis=0)

    def copy_with(self, m: np.ndarray) -> "Magnetization":
        return Magnetization(m=m, Ms=self.Ms)


def normalize(m: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """Rescale every masked cell to unit length and zero everything outside."""
    norm = np.linalg.norm(m, axis=-1, keepdims=True)
    safe = np.where(norm > 0, norm, 1.0)
    return np.where(mask[..., None], m / safe, 0.0)


def uniform_state(grid: MagGrid, direction: tuple[float, float, float], Ms: float) -> Magnetization:
    m = np.broadcast_to(np.asarray(direction, dtype=float), (*grid.shape, 3)).copy()
    return Magnetization(m=normalize(m, grid.mask), Ms=Ms)


def vortex_ansatz(
    grid: MagGrid,
    Ms: float,
    *,
    circulation: int = 1,
    polarity: int = 1,
    core_radius: float = 10e-9,
    core_offset: tuple[float, float] = (0.0, 0.0),
) -> Magnetization:
    """Analytic vortex seed; circulation +1 curls clockwise seen from +z."""
    if circulation not in (1, -1) or polarity not in (1, -1):
        raise DomainError("circulation and polarity must be ±1")
    x, y, _ = grid.cell_centers()
    xx = x[:, None] - core_offset[0]
    yy = y[None, :] - core_offset[1]
    rho2 = xx**2 + yy**2
    phi = np.arctan2(yy, xx)
    mz = polarity * np.exp(-rho2 / core_radius**2)
    in_plane = np.sqrt(np.clip(1.0 - mz**2, 0.0, 1.0))
    m2d = np.stack(
        [circulation * in_plane * np.sin(phi), -circulation * in_plane * np.cos(phi), mz], axis=-1
    )
    m = np.repeat(m2d[:, :, None, :], grid.nz, axis=2)
    return Magnetization(m=normalize(m, grid.mask), Ms=Ms)
