"""Cell-averaged demagnetization tensor and its zero-padded FFT convolution.

Tensor components are stored in the order xx, xy, xz, yy, yz, zz, on the
wrap-around layout of the padded grid: offset X lives at index X mod 2n.
Close cell pairs use the Newell surface formulas; pairs further apart than
``near_cells`` cell edges use the point-dipole tensor.
"""

import logging

import numpy as np
import scipy.fft

from micromag.grid import MagGrid

logger = logging.getLogger(__name__)

_EPS = 1e-18

# (function, argument permutation) for xx, xy, xz, yy, yz, zz
_COMPONENTS: tuple[tuple[str, tuple[int, int, int]], ...] = (
    ("f", (0, 1, 2)),
    ("g", (0, 1, 2)),
    ("g", (0, 2, 1)),
    ("f", (1, 2, 0)),
    ("g", (1, 2, 0)),
    ("f", (2, 0, 1)),
)
_PAIRS: tuple[tuple[int, int], ...] = ((0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2))
# Rows of the symmetric tensor as component indices: H_a = -sum_b N_ab M_b
_ROWS: tuple[tuple[int, int, int], ...] = ((0, 1, 2), (1, 3, 4), (2, 4, 5))


def newell_f(x: np.ndarray, y: np.ndarray, z: np.ndarray) -> np.ndarray:
    x, y, z = np.abs(x), np.abs(y), np.abs(z)
    x2, y2, z2 = x * x, y * y, z * z
    r = np.sqrt(x2 + y2 + z2)
    return (
        y / 2.0 * (z2 - x2) * np.arcsinh(y / (np.sqrt(x2 + z2) + _EPS))
        + z / 2.0 * (y2 - x2) * np.arcsinh(z / (np.sqrt(x2 + y2) + _EPS))
        - x * y * z * np.arctan(y * z / (x * r + _EPS))
        + (2.0 * x2 - y2 - z2) * r / 6.0
    )


def newell_g(x: np.ndarray, y: np.ndarray, z: np.ndarray) -> np.ndarray:
    z = np.abs(z)
    x2, y2, z2 = x * x, y * y, z * z
    r = np.sqrt(x2 + y2 + z2)
    return (
        x * y * z * np.arcsinh(z / (np.sqrt(x2 + y2) + _EPS))
        + y / 6.0 * (3.0 * z2 - y2) * np.arcsinh(x / (np.sqrt(y2 + z2) + _EPS))
        + x / 6.0 * (3.0 * z2 - x2) * np.arcsinh(y / (np.sqrt(x2 + z2) + _EPS))
        - z2 * z / 6.0 * np.arctan(x * y / (z * r + _EPS))
        - z * y2 / 2.0 * np.arctan(x * z / (y * r + _EPS))
        - z * x2 / 2.0 * np.arctan(y * z / (x * r + _EPS))
        - x * y * r / 3.0
    )


def _second_difference(values: np.ndarray, axis: int) -> np.ndarray:
    """Stencil -v[i-1] + 2 v[i] - v[i+1], shrinking the axis by two."""
    n = values.shape[axis]
    centre = np.take(values, np.arange(1, n - 1), axis=axis)
    lower = np.take(values, np.arange(0, n - 2), axis=axis)
    upper = np.take(values, np.arange(2, n), axis=axis)
    return 2.0 * centre - lower - upper


def newell_block(extent: tuple[int, int, int], cell: tuple[float, float, float]) -> np.ndarray:
    """Newell tensor for integer offsets |X_k| <= extent[k]; shape (6, 2ex+1, 2ey+1, 2ez+1).

    Lengths are scaled by the largest cell edge; the tensor is scale invariant.
    """
    scale = max(cell)
    u = np.asarray(cell) / scale
    axes = [np.arange(-e - 1, e + 2) * u[k] for k, e in enumerate(extent)]
    grids = np.meshgrid(*axes, indexing="ij")
    block = np.empty((6, *(2 * e + 1 for e in extent)))
    for c, (name, perm) in enumerate(_COMPONENTS):
        func = newell_f if name == "f" else newell_g
        values = func(grids[perm[0]], grids[perm[1]], grids[perm[2]])
        for axis in range(3):
            values = _second_difference(values, axis)
        block[c] = values / (4.0 * np.pi * float(np.prod(u)))
    return block


def _padded_sizes(grid: MagGrid) -> tuple[int, int, int]:
    return tuple(2 * n if n > 1 else 1 for n in grid.shape)  # type: ignore[return-value]


def _wrapped_offsets(n: int, p: int) -> np.ndarray:
    """Signed offset at each padded index; the unused index p/2 is flagged as n."""
    offsets = np.fft.fftfreq(p, 1.0 / p).astype(int)
    offsets[np.abs(offsets) >= n] = n
    return offsets


def demag_tensor(grid: MagGrid, near_cells: int) -> np.ndarray:
    """Full tensor N on the padded wrap-around layout, shape (6, px, py, pz)."""
    padded = _padded_sizes(grid)
    offsets = [_wrapped_offsets(n, p) for n, p in zip(grid.shape, padded)]
    coords = np.meshgrid(*(o * d for o, d in zip(offsets, grid.cell_sizes)), indexing="ij")
    r2 = coords[0] ** 2 + coords[1] ** 2 + coords[2] ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        inv_r5 = np.where(r2 > 0, r2**-2.5, 0.0)
    volume = grid.cell_volume
    tensor = np.empty((6, *padded))
    for c, (a, b) in enumerate(_PAIRS):
        delta = r2 if a == b else 0.0
        tensor[c] = -volume / (4.0 * np.pi) * (3.0 * coords[a] * coords[b] - delta) * inv_r5

    largest = max(grid.cell_sizes)
    extent = tuple(
        min(n - 1, int(near_cells * largest / d)) for n, d in zip(grid.shape, grid.cell_sizes)
    )
    block = newell_block(extent, grid.cell_sizes)  # type: ignore[arg-type]
    index = np.ix_(*(np.arange(-e, e + 1) % p for e, p in zip(extent, padded)))
    for c in range(6):
        tensor[c][index] = block[c]

    for axis, (n, p) in enumerate(zip(grid.shape, padded)):
        if p > 1:
            unused = [slice(None)] * 3
            unused[axis] = slice(n, n + 1)
            tensor[(slice(None), *unused)] = 0.0
    logger.debug("Demag tensor on padded grid %s, Newell extent %s", padded, extent)
    return tensor


class DemagKernel:
    """Fourier-space demag tensor bound to a grid; evaluates H_demag by zero-padded convolution."""

    def __init__(self, grid: MagGrid, *, near_cells: int, workers: int = 1) -> None:
        self._grid = grid
        self._workers = workers
        self._padded = _padded_sizes(grid)
        self.tensor = demag_tensor(grid, near_cells)
        self._spectrum = scipy.fft.rfftn(self.tensor, axes=(1, 2, 3), workers=workers)

    def field(self, magnetization: np.ndarray) -> np.ndarray:
        """H_demag = −N ⊛ M for M = Ms·m, both shaped (nx, ny, nz, 3), A/m."""
        grid = self._grid
        m_hat = scipy.fft.rfftn(
            np.moveaxis(magnetization, -1, 0), s=self._padded, axes=(1, 2, 3), workers=self._workers
        )
        h_hat = np.empty_like(m_hat)
        for a, row in enumerate(_ROWS):
            h_hat[a] = -(
                self._spectrum[row[0]] * m_hat[0]
                + self._spectrum[row[1]] * m_hat[1]
                + self._spectrum[row[2]] * m_hat[2]
            )
        h = scipy.fft.irfftn(h_hat, s=self._padded, axes=(1, 2, 3), workers=self._workers)
        return np.moveaxis(h[:, : grid.nx, : grid.ny, : grid.nz], 0, -1)


def demag_field_direct(magnetization: np.ndarray, grid: MagGrid, tensor: np.ndarray) -> np.ndarray:
    """Pairwise O(N²) summation with the same tensor; reference for the FFT path."""
    padded = tensor.shape[1:]
    ix, iy, iz = (np.arange(n) for n in grid.shape)
    field = np.zeros_like(magnetization)
    for tx in range(grid.nx):
        for ty in range(grid.ny):
            for tz in range(grid.nz):
                index = np.ix_(
                    (tx - ix) % padded[0], (ty - iy) % padded[1], (tz - iz) % padded[2]
                )
                for a, row in enumerate(_ROWS):
                    field[tx, ty, tz, a] = -sum(
                        float(np.sum(tensor[c][index] * magnetization[..., b])) for b, c in enumerate(row)
                    )
    return field
