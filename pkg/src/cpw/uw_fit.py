"""Two-term power-law fit of the geometric field factor u_w(r)."""

import logging

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.optimize import curve_fit

from constants import DEFAULT_FILAMENT_LAYERS, DEFAULT_STANDOFF_M
from cpw.field import uw_at
from physics.errors import DomainError, FitResidualError
from physics.models import ResonatorSpec

logger = logging.getLogger(__name__)

MIN_RADII = 6
MIN_SPAN = 4.0
MAX_POINTWISE_RESIDUAL = 0.05
ALPHA_BOUNDS = (1e-3, 0.999)


class UwFit(BaseModel):
    """u_w(r) = a1/r + a2/r^alpha over ``fit_range``."""

    model_config = ConfigDict(frozen=True)

    a1: float = Field(..., description="Line-current coefficient, dimensionless")
    a2: float = Field(..., description="Near-field coefficient, m^(alpha-1)")
    alpha: float = Field(..., gt=0, lt=1, description="Near-field exponent")
    w: float = Field(..., gt=0, description="Strip width the fit belongs to, m")
    fit_range: tuple[float, float] = Field(..., description="Smallest and largest fitted radius, m")
    max_residual: float = Field(default=0.0, ge=0, description="Largest pointwise |fit − u_w|/u_w")

    def evaluate(self, r: float) -> float:
        """u_w at radius ``r``, 1/m."""
        return self.a1 / r + self.a2 / r**self.alpha

    def covers(self, r: float) -> bool:
        low, high = self.fit_range
        return low <= r <= high

    def to_text(self) -> str:
        return (
            f"w_m = {self.w!r}\n"
            f"a1 = {self.a1!r}\n"
            f"a2 = {self.a2!r}\n"
            f"alpha = {self.alpha!r}\n"
            f"r_min_m = {self.fit_range[0]!r}\n"
            f"r_max_m = {self.fit_range[1]!r}\n"
            f"max_residual = {self.max_residual!r}\n"
        )


def _scaled_model(s: np.ndarray, a1: float, a2: float, alpha: float) -> np.ndarray:
    return a1 / s + a2 / s**alpha


def fit_uw(
    spec: ResonatorSpec,
    r_list: list[float],
    *,
    standoff: float = DEFAULT_STANDOFF_M,
    layers: int = DEFAULT_FILAMENT_LAYERS,
    max_residual: float = MAX_POINTWISE_RESIDUAL,
) -> UwFit:
    """Least-squares fit of u_w(r) computed from the field model at each radius.

    Radii are fitted in units of w, so ``a2`` picks up a factor w^(alpha−1) on the way out.
    Raises FitResidualError listing every point when any relative residual exceeds ``max_residual``.
    """
    radii = np.asarray(sorted(r_list), dtype=float)
    if radii.size < MIN_RADII:
        raise DomainError(f"u_w fit needs at least {MIN_RADII} radii, got {radii.size}")
    if radii[0] <= 0 or radii[-1] / radii[0] < MIN_SPAN:
        raise DomainError(f"u_w fit radii must be positive and span a factor {MIN_SPAN:g}")

    w = spec.w
    uw = np.array([uw_at(spec, float(r), standoff=standoff, layers=layers) for r in radii])
    s = radii / w
    scaled = uw * w
    params, _cov = curve_fit(
        _scaled_model,
        s,
        scaled,
        p0=(0.5, 0.5, 0.5),
        bounds=((-np.inf, -np.inf, ALPHA_BOUNDS[0]), (np.inf, np.inf, ALPHA_BOUNDS[1])),
        sigma=scaled,
        maxfev=20000,
    )
    a1, a2, alpha = (float(p) for p in params)
    residuals = (_scaled_model(s, a1, a2, alpha) - scaled) / scaled
    worst = float(np.max(np.abs(residuals)))
    logger.debug("u_w fit for w = %.3e m: a1 = %.4f, alpha = %.4f, worst residual %.2e", w, a1, alpha, worst)
    if worst > max_residual:
        raise FitResidualError(
            f"u_w fit residual {worst:.2%} exceeds {max_residual:.0%}",
            [(float(r), float(res)) for r, res in zip(radii, residuals)],
        )
    return UwFit(
        a1=a1,
        a2=a2 * w ** (alpha - 1.0),
        alpha=alpha,
        w=w,
        fit_range=(float(radii[0]), float(radii[-1])),
        max_residual=worst,
    )
