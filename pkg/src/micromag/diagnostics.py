"""Topological diagnostics of a vortex state: polarity, circulation and core position."""

import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from micromag.grid import MagGrid, Magnetization
from physics.errors import NotAVortexError

_MIN_CORE_MZ = 0.5


class VortexState(BaseModel):

    model_config = ConfigDict(frozen=True)

    polarity: int = Field(..., description="Core m_z sign, ±1")
    circulation: int = Field(..., description="+1 clockwise seen from +z, −1 counter-clockwise")
    core_position: tuple[float, float] = Field(
        default=(0.0, 0.0), description="Core centre (x, y) from the disc axis, m"
    )


class _CoreRegion(BaseModel):

    model_config = ConfigDict(arbitrary_types_allowed=True)

    polarity: int
    inside: np.ndarray
    weight: np.ndarray
    x: np.ndarray
    y: np.ndarray


def _plane_coordinates(grid: MagGrid) -> tuple[np.ndarray, np.ndarray]:
    """Cell-centre x, y relative to the box centre, shaped (nx, ny)."""
    x, y, _ = grid.cell_centers()
    cx = grid.origin[0] + grid.nx * grid.dx / 2
    cy = grid.origin[1] + grid.ny * grid.dy / 2
    xx, yy = np.meshgrid(x - cx, y - cy, indexing="ij")
    return xx, yy


def _core_region(mag: Magnetization, grid: MagGrid) -> _CoreRegion:
    mid = grid.nz // 2
    plane_mask = grid.mask[:, :, mid]
    mz = np.where(plane_mask, mag.m[:, :, mid, 2], 0.0)
    peak_index = np.unravel_index(np.argmax(np.abs(mz)), mz.shape)
    peak = float(mz[peak_index])
    if abs(peak) < _MIN_CORE_MZ:
        raise NotAVortexError(f"largest mid-plane |m_z| is {abs(peak):.3f}, below {_MIN_CORE_MZ}; no vortex core")
    polarity = 1 if peak > 0 else -1

    aligned = polarity * mz
    background = float(np.median(aligned[plane_mask]))
    half = background + (abs(peak) - background) / 2
    inside = plane_mask & (aligned >= half)
    if inside.sum() > 0.5 * plane_mask.sum():
        raise NotAVortexError("out-of-plane magnetization is not localized; no vortex core")
    x, y = _plane_coordinates(grid)
    return _CoreRegion(polarity=polarity, inside=inside, weight=np.where(inside, aligned - half, 0.0), x=x, y=y)


def _rim(plane_mask: np.ndarray) -> np.ndarray:
    """Masked cells with at least one unmasked (or out-of-box) four-neighbour."""
    padded = np.pad(plane_mask, 1, constant_values=False)
    interior = padded[:-2, 1:-1] & padded[2:, 1:-1] & padded[1:-1, :-2] & padded[1:-1, 2:]
    return plane_mask & ~interior


def circulation_sum(mag: Magnetization, grid: MagGrid) -> float:
    """Σ m·t̂ over mid-plane rim cells, with t̂ the clockwise tangent seen from +z."""
    mid = grid.nz // 2
    rim = _rim(grid.mask[:, :, mid])
    x, y = _plane_coordinates(grid)
    rho = np.hypot(x, y)
    safe = np.where(rho > 0, rho, 1.0)
    tangential = (mag.m[:, :, mid, 0] * y - mag.m[:, :, mid, 1] * x) / safe
    return float(tangential[rim].sum())


def vortex_diagnostics(mag: Magnetization, grid: MagGrid) -> VortexState:
    """Polarity from the strongest mid-plane m_z, circulation from the rim sum, core from the half-max centroid.

    Raises NotAVortexError when no mid-plane cell has |m_z| ≥ 0.5.
    """
    core = _core_region(mag, grid)
    total = float(core.weight.sum())
    if total > 0:
        position = (float((core.weight * core.x).sum() / total), float((core.weight * core.y).sum() / total))
    else:
        index = np.unravel_index(np.argmax(core.inside), core.inside.shape)
        position = (float(core.x[index]), float(core.y[index]))
    return VortexState(
        polarity=core.polarity,
        circulation=1 if circulation_sum(mag, grid) >= 0 else -1,
        core_position=position,
    )


def core_radius(mag: Magnetization, grid: MagGrid) -> float:
    """Radius of the disc with the same area as the half-maximum core region, m."""
    core = _core_region(mag, grid)
    area = float(core.inside.sum()) * grid.dx * grid.dy
    return math.sqrt(area / math.pi)
