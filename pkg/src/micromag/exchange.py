import numpy as np

from micromag.grid import MagGrid
from physics.models import PHYSICAL, MaterialParams


def _neighbour(a: np.ndarray, shift: int, axis: int, periodic: bool) -> np.ndarray:
    """Array of neighbour values at index i + shift; zero beyond an open boundary."""
    rolled = np.roll(a, -shift, axis=axis)
    if not periodic:
        edge = [slice(None)] * a.ndim
        edge[axis] = slice(-1, None) if shift > 0 else slice(0, 1)
        rolled[tuple(edge)] = 0
    return rolled


def exchange_field(m: np.ndarray, grid: MagGrid, material: MaterialParams) -> np.ndarray:
    """H_exch = (2A/(μ0 Ms))·∇²m with a six-neighbour stencil, A/m.

    Missing neighbours (outside the mask or past an open edge) drop out of the
    stencil, which is the free Neumann boundary condition.
    """
    coefficient = 2.0 * material.Aex / (PHYSICAL.mu0 * material.Ms)
    mask = grid.mask
    laplacian = np.zeros_like(m)
    for axis, (n, d) in enumerate(zip(grid.shape, grid.cell_sizes)):
        if n == 1:
            continue
        for shift in (1, -1):
            periodic = grid.periodic[axis]
            present = _neighbour(mask, shift, axis, periodic)[..., None]
            laplacian += np.where(present, _neighbour(m, shift, axis, periodic) - m, 0.0) / d**2
    return np.where(mask[..., None], coefficient * laplacian, 0.0)
