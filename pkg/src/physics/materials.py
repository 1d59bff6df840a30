"""Material presets and the micromagnetic reference discs."""

from typing import Final

from pydantic import BaseModel, ConfigDict, Field

from physics.models import PHYSICAL, MaterialParams


def _from_tesla(mu0_ms: float) -> float:
    return mu0_ms / PHYSICAL.mu0


# Exchange stiffness for everything but CoFe uses handbook room-temperature values.
MATERIAL_PRESETS: Final[dict[str, MaterialParams]] = {
    "CoFe": MaterialParams(name="CoFe", Ms=1.9e6, Aex=2.6e-11, alpha_llg=5e-4),
    "Fe": MaterialParams(name="Fe", Ms=_from_tesla(2.2), Aex=2.1e-11, alpha_llg=2e-3),
    "Py": MaterialParams(name="Py", Ms=_from_tesla(1.0), Aex=1.3e-11, alpha_llg=8e-3),
    "NiMnSb": MaterialParams(name="NiMnSb", Ms=_from_tesla(0.85), Aex=1.0e-11, alpha_llg=1e-3),
    "YIG": MaterialParams(name="YIG", Ms=_from_tesla(0.18), Aex=3.65e-12, alpha_llg=5e-5),
}

DEFAULT_MATERIAL: Final[str] = "CoFe"


def material_preset(name: str) -> MaterialParams:
    """Look up a preset case-insensitively; raises KeyError listing the known names."""
    for key, material in MATERIAL_PRESETS.items():
        if key.lower() == name.lower():
            return material
    raise KeyError(f"Unknown material preset {name!r}; known: {sorted(MATERIAL_PRESETS)}")


class ReferenceDisc(BaseModel):
    """A CoFe disc with micromagnetically established gyrotropic parameters."""

    model_config = ConfigDict(frozen=True)

    r: float = Field(..., description="Radius, m")
    t: float = Field(..., description="Thickness, m")
    f_G: float = Field(..., description="Gyrotropic frequency, Hz")
    delta_f_G: float = Field(..., description="Gyrotropic linewidth (FWHM), Hz")
    alpha_v_tabulated: float = Field(..., description="Vortex damping as tabulated alongside f_G")
    cells: tuple[int, int, int] = Field(..., description="Reference grid (nx, ny, nz)")


REFERENCE_DISCS: Final[tuple[ReferenceDisc, ...]] = (
    ReferenceDisc(r=100e-9, t=15e-9, f_G=1.402e9, delta_f_G=3.5e6, alpha_v_tabulated=5.0e-3, cells=(64, 64, 8)),
    ReferenceDisc(r=200e-9, t=30e-9, f_G=1.255e9, delta_f_G=3.3e6, alpha_v_tabulated=5.3e-3, cells=(128, 128, 16)),
    ReferenceDisc(r=400e-9, t=60e-9, f_G=1.093e9, delta_f_G=3.0e6, alpha_v_tabulated=5.5e-3, cells=(256, 256, 32)),
)


def reference_disc(r: float, t: float, rel_tol: float = 1e-6) -> ReferenceDisc | None:
    """Return the reference disc matching (r, t), or None."""
    for disc in REFERENCE_DISCS:
        if abs(disc.r - r) <= rel_tol * disc.r and abs(disc.t - t) <= rel_tol * disc.t:
            return disc
    return None
