"""Landau-Lifshitz-Gilbert right-hand side and the fixed-step RK4 integrator."""

import logging
from typing import Callable

import numpy as np

from micromag.grid import MagGrid, Magnetization, normalize
from physics.errors import IntegrationError
from physics.models import PHYSICAL

logger = logging.getLogger(__name__)

# Field source: a fixed (nx, ny, nz, 3) array, or a callable of (m, t) returning one.
FieldSource = np.ndarray | Callable[[np.ndarray, float], np.ndarray]


def llg_rhs(m: np.ndarray, h: np.ndarray, alpha: float) -> np.ndarray:
    """dm/dt = −γμ0/(1+α²)·[m×H + α·m×(m×H)] with H in A/m."""
    prefactor = -PHYSICAL.gamma * PHYSICAL.mu0 / (1.0 + alpha**2)
    mxh = np.cross(m, h)
    return prefactor * (mxh + alpha * np.cross(m, mxh))


def _field_at(field: FieldSource, m: np.ndarray, t: float) -> np.ndarray:
    return field(m, t) if callable(field) else field


def rk4_step(m: np.ndarray, field: FieldSource, alpha: float, dt: float, t: float = 0.0) -> np.ndarray:
    """Classic RK4 increment of the raw array, without renormalization."""
    k1 = llg_rhs(m, _field_at(field, m, t), alpha)
    m2 = m + 0.5 * dt * k1
    k2 = llg_rhs(m2, _field_at(field, m2, t + 0.5 * dt), alpha)
    m3 = m + 0.5 * dt * k2
    k3 = llg_rhs(m3, _field_at(field, m3, t + 0.5 * dt), alpha)
    m4 = m + dt * k3
    k4 = llg_rhs(m4, _field_at(field, m4, t + dt), alpha)
    return m + dt * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0


def llg_step(
    mag: Magnetization,
    field: FieldSource,
    alpha: float,
    dt: float,
    *,
    grid: MagGrid,
    t: float = 0.0,
    step: int = 0,
) -> Magnetization:
    """Advance one RK4 step and renormalize every masked cell to unit length.

    Raises IntegrationError carrying ``step`` when the field or the update is not finite.
    """
    m_next = rk4_step(mag.m, field, alpha, dt, t)
    if not np.isfinite(m_next).all():
        raise IntegrationError(f"non-finite magnetization after step {step}", step=step)
    return mag.copy_with(normalize(m_next, grid.mask))


def evolve(
    mag: Magnetization,
    field: FieldSource,
    alpha: float,
    dt: float,
    n_steps: int,
    *,
    grid: MagGrid,
    t0: float = 0.0,
    on_step: Callable[[int, float, Magnetization], None] | None = None,
) -> Magnetization:
    """Run ``n_steps`` LLG steps; ``on_step`` sees (index, time after the step, state)."""
    for i in range(n_steps):
        t = t0 + i * dt
        mag = llg_step(mag, field, alpha, dt, grid=grid, t=t, step=i)
        if on_step is not None:
            on_step(i, t + dt, mag)
    return mag
