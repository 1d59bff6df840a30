"""Single-photon field of the constriction: superposed straight-filament fields in the disc plane."""

import logging
import math
from typing import Self

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from constants import DEFAULT_FILAMENT_LAYERS, DEFAULT_STANDOFF_M
from cpw.current import SheetCurrentDistribution, strip_current_distribution
from physics.circuit import i_rms
from physics.errors import DomainError
from physics.models import PHYSICAL, DiscGeometry, ResonatorSpec

logger = logging.getLogger(__name__)

# Points evaluated per vectorized block.
POINT_CHUNK = 256
# Largest tolerated |b_y|/b_x at the disc centre.
TRANSVERSE_TOLERANCE = 0.05


class MapRegion(BaseModel):
    """Rectangular window of the cross-section plane sampled by a field map."""

    model_config = ConfigDict(frozen=True)

    x_min: float = Field(..., description="Left edge, m")
    x_max: float = Field(..., description="Right edge, m")
    y_min: float = Field(..., description="Bottom edge, m")
    y_max: float = Field(..., description="Top edge, m")
    nx: int = Field(default=101, gt=0, description="Points along x")
    ny: int = Field(default=101, gt=0, description="Points along y")

    @model_validator(mode="after")
    def _check_extent(self) -> Self:
        if self.x_max < self.x_min or self.y_max < self.y_min:
            raise ValueError("region bounds must be ordered min ≤ max")
        return self

    def axes(self) -> tuple[np.ndarray, np.ndarray]:
        return np.linspace(self.x_min, self.x_max, self.nx), np.linspace(self.y_min, self.y_max, self.ny)


class FieldMap(BaseModel):
    """b(x, y) at z = 0; points inside the conductor are NaN and flagged invalid."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    x: np.ndarray = Field(..., description="x axis, m")
    y: np.ndarray = Field(..., description="y axis, m")
    b: np.ndarray = Field(..., description="(nx, ny, 3) field, T")
    valid: np.ndarray = Field(..., description="(nx, ny) False inside the conductor")
    source_current: float = Field(..., description="Total strip current, A")

    def to_csv(self) -> str:
        rows = ["x_m,y_m,bx_T,by_T"]
        for ix, x in enumerate(self.x):
            for iy, y in enumerate(self.y):
                bx, by, _bz = self.b[ix, iy]
                rows.append(f"{float(x)!r},{float(y)!r},{float(bx)!r},{float(by)!r}")
        return "\n".join(rows) + "\n"


class DiscCenterField(BaseModel):
    """Single-photon field at the disc centre with any transverse-field warnings."""

    model_config = ConfigDict(frozen=True)

    bx: float = Field(..., description="b_x at r_c, T")
    by: float = Field(..., description="b_y at r_c, T")
    bz: float = Field(default=0.0, description="b_z at r_c, T")
    current: float = Field(..., description="Zero-point rms current sourcing the field, A")
    center: tuple[float, float, float] = Field(..., description="Disc centre r_c, m")
    warnings: list[str] = Field(default_factory=list)

    def to_text(self) -> str:
        lines = [
            f"i_rms_A = {self.current!r}",
            f"r_c_m = {self.center[0]!r}, {self.center[1]!r}, {self.center[2]!r}",
            f"bx_T = {self.bx!r}",
            f"by_T = {self.by!r}",
            f"bz_T = {self.bz!r}",
        ]
        return "\n".join(lines + [f"warning = {w}" for w in self.warnings]) + "\n"


def _filaments(dist: SheetCurrentDistribution) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Filament positions (x', y') and currents, each layer carrying an equal share.

    A single layer is a sheet on the upper surface; several sit at the midpoints of equal slabs of the film.
    """
    if dist.layers == 1:
        depths = np.zeros(1)
    else:
        depths = -(np.arange(dist.layers) + 0.5) * dist.film_thickness / dist.layers
    fx = np.tile(dist.x_samples, dist.layers)
    fy = np.repeat(depths, dist.x_samples.size)
    current = np.tile(dist.j * dist.dx / dist.layers, dist.layers)
    return fx, fy, current


def inside_conductor(dist: SheetCurrentDistribution, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return (np.abs(x) <= dist.w / 2.0) & (y >= -dist.film_thickness) & (y <= 0.0)


def field_at_points(dist: SheetCurrentDistribution, points: np.ndarray) -> np.ndarray:
    """Field (T) at an (M, 2) array of (x, y) points; NaN for points inside the conductor.

    Each filament carrying I along −z contributes μ0·I/(2π)·(Δy, −Δx)/|Δ|².
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    fx, fy, current = _filaments(dist)
    b = np.zeros((points.shape[0], 3))
    for start in range(0, points.shape[0], POINT_CHUNK):
        block = points[start:start + POINT_CHUNK]
        dx = block[:, 0, None] - fx[None, :]
        dy = block[:, 1, None] - fy[None, :]
        with np.errstate(divide="ignore", invalid="ignore"):
            weight = current[None, :] / (dx**2 + dy**2)
            b[start:start + POINT_CHUNK, 0] = np.sum(weight * dy, axis=1)
            b[start:start + POINT_CHUNK, 1] = -np.sum(weight * dx, axis=1)
    b *= PHYSICAL.mu0 / (2.0 * math.pi)
    b[inside_conductor(dist, points[:, 0], points[:, 1])] = np.nan
    return b


def field_map(dist: SheetCurrentDistribution, region: MapRegion) -> FieldMap:
    x, y = region.axes()
    gx, gy = np.meshgrid(x, y, indexing="ij")
    points = np.column_stack([gx.ravel(), gy.ravel()])
    b = field_at_points(dist, points).reshape(region.nx, region.ny, 3)
    valid = ~inside_conductor(dist, gx, gy)
    if not valid.all():
        logger.debug("Field map: %d points inside the conductor marked invalid", int((~valid).sum()))
    return FieldMap(x=x, y=y, b=b, valid=valid, source_current=dist.total_current)


def field_on_cells(
    dist: SheetCurrentDistribution,
    center: tuple[float, float, float],
    x_offsets: np.ndarray,
    y_offsets: np.ndarray,
    nz: int,
) -> np.ndarray:
    """Field (T) on a disc's cells, shaped (nx, ny, nz, 3) and constant through the thickness.

    Offsets are cell centres relative to ``center`` in the cross-section plane.
    """
    gx, gy = np.meshgrid(center[0] + x_offsets, center[1] + y_offsets, indexing="ij")
    b = field_at_points(dist, np.column_stack([gx.ravel(), gy.ravel()]))
    if np.isnan(b).any():
        raise DomainError("disc cells overlap the conductor")
    b = b.reshape(x_offsets.size, y_offsets.size, 3)
    return np.repeat(b[:, :, None, :], nz, axis=2)


def disc_center_field(
    spec: ResonatorSpec,
    geom: DiscGeometry,
    *,
    layers: int = DEFAULT_FILAMENT_LAYERS,
) -> DiscCenterField:
    """Single-photon field at the disc centre, sourced by i_rms(f_cpw, Z0)."""
    current = i_rms(spec.f_cpw, spec.Z0)
    dist = strip_current_distribution(spec, current, layers=layers)
    bx, by, bz = field_at_points(dist, np.array([geom.center[:2]]))[0]
    warnings = []
    if abs(by) > TRANSVERSE_TOLERANCE * abs(bx):
        message = f"b_y/b_x = {by / bx:.3f} at the disc centre exceeds {TRANSVERSE_TOLERANCE:.0%}"
        logger.warning(message)
        warnings.append(message)
    return DiscCenterField(
        bx=float(bx), by=float(by), bz=float(bz), current=current, center=geom.center, warnings=warnings
    )


def field_at_disc_center(spec: ResonatorSpec, geom: DiscGeometry, *, layers: int = DEFAULT_FILAMENT_LAYERS) -> float:
    """b_x^rms at r_c, T."""
    return disc_center_field(spec, geom, layers=layers).bx


def uw_at(
    spec: ResonatorSpec,
    r: float,
    *,
    standoff: float = DEFAULT_STANDOFF_M,
    layers: int = DEFAULT_FILAMENT_LAYERS,
) -> float:
    """Geometric factor u_w(r) = b_x(r_c)·2π/(μ0·i), 1/m, for a disc of radius ``r`` above the strip."""
    unit = strip_current_distribution(spec, 1.0, layers=layers)
    bx = field_at_points(unit, np.array([[0.0, standoff + r]]))[0, 0]
    return float(bx * 2.0 * math.pi / PHYSICAL.mu0)
