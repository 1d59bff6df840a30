"""OVF 2.0 snapshot reader and writer.

Writes the text flavour; reads text and 4/8-byte binary data blocks. Values are
ordered with x fastest, then y, then z. Cells outside the mask are written as
zero vectors, and on reading every non-zero cell is taken as inside the body.
"""

import logging
from pathlib import Path

import numpy as np

from micromag.grid import MagGrid, Magnetization
from physics.errors import ConfigError
from utils.fs import atomic_write_text

logger = logging.getLogger(__name__)

_CONTROL_VALUES = {4: 1234567.0, 8: 123456789012345.0}


def format_ovf(mag: Magnetization, grid: MagGrid, *, title: str = "m", total_time: float = 0.0) -> str:
    xmin, ymin, zmin = grid.origin
    header = {
        "Title": title,
        "meshtype": "rectangular",
        "meshunit": "m",
        "xmin": xmin,
        "ymin": ymin,
        "zmin": zmin,
        "xmax": xmin + grid.nx * grid.dx,
        "ymax": ymin + grid.ny * grid.dy,
        "zmax": zmin + grid.nz * grid.dz,
        "valuedim": 3,
        "valuelabels": "m_x m_y m_z",
        "valueunits": "1 1 1",
        "Desc": f"Total simulation time: {total_time!r} s; Ms = {mag.Ms!r} A/m",
        "xbase": grid.dx / 2,
        "ybase": grid.dy / 2,
        "zbase": grid.dz / 2,
        "xnodes": grid.nx,
        "ynodes": grid.ny,
        "znodes": grid.nz,
        "xstepsize": grid.dx,
        "ystepsize": grid.dy,
        "zstepsize": grid.dz,
    }
    lines = ["# OOMMF OVF 2.0", "# Segment count: 1", "# Begin: Segment", "# Begin: Header"]
    lines += [
        f"# {key}: {value!r}" if isinstance(value, float) else f"# {key}: {value}" for key, value in header.items()
    ]
    lines += ["# End: Header", "# Begin: Data Text"]
    values = np.where(grid.mask[..., None], mag.m, 0.0).transpose(2, 1, 0, 3).reshape(-1, 3)
    lines += [f"{vx!r} {vy!r} {vz!r}" for vx, vy, vz in values.tolist()]
    lines += ["# End: Data Text", "# End: Segment"]
    return "\n".join(lines) + "\n"


def _parse_header(raw: bytes) -> tuple[dict[str, str], str, int]:
    """Header key/values, the data-block kind line and the byte offset where data starts."""
    header: dict[str, str] = {}
    offset = 0
    for line in raw.splitlines(keepends=True):
        offset += len(line)
        text = line.decode("ascii", errors="replace").strip()
        if not text.startswith("#"):
            continue
        body = text.lstrip("#").strip()
        if body.lower().startswith("begin: data"):
            return header, body, offset
        key, sep, value = body.partition(":")
        if sep:
            header[key.strip().lower()] = value.strip()
    raise ConfigError("OVF file has no data block")


def _decode_ms(desc: str) -> float | None:
    marker = "Ms = "
    if marker not in desc:
        return None
    return float(desc.split(marker, 1)[1].split()[0])


def parse_ovf(raw: bytes, *, Ms: float | None = None) -> tuple[Magnetization, MagGrid]:
    """Decode OVF bytes; ``Ms`` overrides the value recorded in the description line."""
    header, kind, offset = _parse_header(raw)
    try:
        nx, ny, nz = (int(header[f"{axis}nodes"]) for axis in "xyz")
        dx, dy, dz = (float(header[f"{axis}stepsize"]) for axis in "xyz")
        origin = tuple(float(header.get(f"{axis}min", 0.0)) for axis in "xyz")
        valuedim = int(header.get("valuedim", 3))
    except (KeyError, ValueError) as e:
        raise ConfigError(f"OVF header is incomplete: {type(e).__name__}: {e}") from e
    if valuedim != 3:
        raise ConfigError(f"OVF valuedim {valuedim} is not a vector field")

    count = nx * ny * nz * 3
    parts = kind.split()
    if parts[2].lower() == "text":
        text = raw[offset:].decode("ascii")
        numbers = [float(tok) for line in text.splitlines() if not line.startswith("#") for tok in line.split()]
        values = np.asarray(numbers[:count])
    else:
        size = int(parts[-1])
        if size not in _CONTROL_VALUES:
            raise ConfigError(f"unsupported OVF binary width {size}")
        dtype = np.dtype(f"<f{size}")
        if np.frombuffer(raw, dtype=dtype, count=1, offset=offset)[0] != _CONTROL_VALUES[size]:
            dtype = dtype.newbyteorder(">")
        values = np.frombuffer(raw, dtype=dtype, count=count, offset=offset + size).astype(float)
    if values.size != count:
        raise ConfigError(f"OVF data block holds {values.size} values, expected {count}")

    m = values.reshape(nz, ny, nx, 3).transpose(2, 1, 0, 3).copy()
    mask = np.linalg.norm(m, axis=-1) > 0
    grid = MagGrid(nx=nx, ny=ny, nz=nz, dx=dx, dy=dy, dz=dz, mask=mask, origin=origin)  # type: ignore[arg-type]
    recorded = _decode_ms(header.get("desc", ""))
    saturation = Ms if Ms is not None else recorded
    if saturation is None:
        raise ConfigError("OVF file does not record Ms; pass it explicitly")
    return Magnetization(m=m, Ms=saturation), grid


def write_ovf(path: Path, mag: Magnetization, grid: MagGrid, *, title: str = "m") -> None:
    atomic_write_text(path, format_ovf(mag, grid, title=title))
    logger.debug("Wrote OVF snapshot %s", path)


def read_ovf(path: Path, *, Ms: float | None = None) -> tuple[Magnetization, MagGrid]:
    return parse_ovf(path.read_bytes(), Ms=Ms)
