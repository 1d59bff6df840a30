"""Vortex ground-state relaxation by strongly damped LLG."""

import logging

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from constants import (
    DEFAULT_DT_S,
    DEFAULT_MAX_RELAX_STEPS,
    DEFAULT_RELAX_ALPHA,
    DEFAULT_TORQUE_TOLERANCE,
)
from micromag.diagnostics import VortexState, vortex_diagnostics
from micromag.fields import FieldModel
from micromag.grid import MagGrid, Magnetization, vortex_ansatz
from micromag.llg import llg_step
from physics.errors import ConvergenceError, NotAVortexError, VortexLostError
from physics.models import MaterialParams

logger = logging.getLogger(__name__)


class RelaxSettings(BaseModel):

    model_config = ConfigDict(frozen=True)

    dt: float = Field(default=DEFAULT_DT_S, gt=0, description="Integrator step, s")
    alpha: float = Field(default=DEFAULT_RELAX_ALPHA, gt=0, description="Damping used while relaxing")
    torque_tolerance: float = Field(default=DEFAULT_TORQUE_TOLERANCE, gt=0, description="Max |m×H|/Ms at convergence")
    max_steps: int = Field(default=DEFAULT_MAX_RELAX_STEPS, gt=0, description="Step budget")
    check_every: int = Field(default=50, gt=0, description="Steps between torque checks")
    seed_core_radius: float = Field(default=10e-9, gt=0, description="Core radius of the analytic seed, m")


class RelaxResult(BaseModel):

    model_config = ConfigDict(arbitrary_types_allowed=True)

    magnetization: Magnetization = Field(..., description="Relaxed state")
    state: VortexState = Field(..., description="Diagnostics of the relaxed state")
    steps: int = Field(..., description="LLG steps taken")
    residual_torque: float = Field(..., description="Max |m×H|/Ms at exit")


def max_torque(m: np.ndarray, h: np.ndarray, Ms: float, mask: np.ndarray) -> float:
    """Largest cell torque |m×H|/Ms over masked cells, dimensionless."""
    torque = np.linalg.norm(np.cross(m, h), axis=-1)
    return float(torque[mask].max(initial=0.0)) / Ms


def relax(
    grid: MagGrid,
    material: MaterialParams,
    b_dc: float,
    seed: VortexState,
    *,
    settings: RelaxSettings | None = None,
    field_model: FieldModel | None = None,
    initial: Magnetization | None = None,
) -> RelaxResult:
    """Relax a seeded vortex under a uniform out-of-plane field ``b_dc`` (T).

    Raises ConvergenceError when the torque stays above tolerance for the whole
    step budget, and VortexLostError when the relaxed state no longer holds the
    seeded polarity and circulation.
    """
    settings = settings or RelaxSettings()
    model = field_model or FieldModel(grid, material)
    mag = initial or vortex_ansatz(
        grid,
        material.Ms,
        circulation=seed.circulation,
        polarity=seed.polarity,
        core_radius=settings.seed_core_radius,
        core_offset=seed.core_position,
    )
    b_applied = (0.0, 0.0, b_dc)

    def field(m: np.ndarray, _t: float) -> np.ndarray:
        return model.total(m, b_applied)

    torque = float("inf")
    step = 0
    while step < settings.max_steps:
        mag = llg_step(mag, field, settings.alpha, settings.dt, grid=grid, step=step)
        step += 1
        if step % settings.check_every == 0 or step == settings.max_steps:
            torque = max_torque(mag.m, model.total(mag.m, b_applied), mag.Ms, grid.mask)
            logger.debug("Relax step %d: residual torque %.3e", step, torque)
            if torque < settings.torque_tolerance:
                break
    else:
        raise ConvergenceError(f"relaxation did not converge in {settings.max_steps} steps", residual=torque)

    try:
        state = vortex_diagnostics(mag, grid)
    except NotAVortexError as e:
        raise VortexLostError(f"relaxed state has no vortex core: {e}", b_dc=b_dc) from e
    if state.polarity != seed.polarity or state.circulation != seed.circulation:
        raise VortexLostError(
            f"relaxed into P={state.polarity:+d}, C={state.circulation:+d} instead of the seeded "
            f"P={seed.polarity:+d}, C={seed.circulation:+d}",
            b_dc=b_dc,
        )
    logger.debug("Relaxed in %d steps, core at %s", step, state.core_position)
    return RelaxResult(magnetization=mag, state=state, steps=step, residual_torque=torque)
