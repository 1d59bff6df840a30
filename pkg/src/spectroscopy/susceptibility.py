"""Resonant susceptibility χ_x = ΔM_x/b_x at the gyrotropic frequency."""

import logging
import math

import numpy as np

from constants import (
    DEFAULT_DRIVE_AMPLITUDE_T,
    DEFAULT_DT_S,
    DEFAULT_MAX_DRIVE_DURATION_S,
    DEFAULT_SAMPLE_DT_S,
    DEFAULT_STEADY_TOLERANCE,
)
from micromag.fields import FieldModel
from micromag.grid import MagGrid, Magnetization
from physics.errors import DomainError, SteadyStateError
from physics.models import PHYSICAL, MaterialParams
from spectroscopy.excitation import ExcitationKind, ExcitationSpec, drive_samples

logger = logging.getLogger(__name__)


def analytic_susceptibility(Ms: float, xi: float, delta_f_G: float) -> float:
    """χ_x = (γ/2π)·Ms·ξ²/Δf_G, (A/m)/T."""
    if delta_f_G <= 0:
        raise DomainError("linewidth must be positive")
    return PHYSICAL.gamma_over_2pi * Ms * xi**2 / delta_f_G


def ring_up_time(delta_f_G: float) -> float:
    """Amplitude time constant 1/(π·Δf_G) of a resonance with FWHM Δf_G, s."""
    return 1.0 / (math.pi * delta_f_G)


def steady_state_window(f_drive: float, delta_f_G: float) -> float:
    """Envelope comparison window: one drive period or a fifth of the ring-up time, whichever is longer."""
    return max(1.0 / f_drive, ring_up_time(delta_f_G) / 5.0)


def resonant_susceptibility(
    state: Magnetization,
    grid: MagGrid,
    material: MaterialParams,
    f_drive: float,
    delta_f_G: float,
    *,
    b_profile: np.ndarray | None = None,
    b_center: float | None = None,
    amplitude: float = DEFAULT_DRIVE_AMPLITUDE_T,
    b_dc: float = 0.0,
    tolerance: float = DEFAULT_STEADY_TOLERANCE,
    max_duration: float = DEFAULT_MAX_DRIVE_DURATION_S,
    field_model: FieldModel | None = None,
    dt: float = DEFAULT_DT_S,
    sample_dt: float = DEFAULT_SAMPLE_DT_S,
) -> float:
    """Drive at ``f_drive`` until the ⟨M_x⟩ envelope settles and return ΔM_x over the centre drive field.

    ``b_profile`` is a per-cell field map (T) whose x-component at the disc centre
    is ``b_center``; it is rescaled so the centre sees ``amplitude``. Without a
    profile the drive is uniform along x. Raises SteadyStateError when the
    envelope still changes by more than ``tolerance`` after ``max_duration``.
    """
    if b_profile is not None:
        if b_center is None or b_center == 0:
            raise DomainError("a field profile needs its non-zero disc-centre value b_center")
        shape = b_profile / b_center
    else:
        shape = None

    window = steady_state_window(f_drive, delta_f_G)
    settle = ring_up_time(delta_f_G)
    per_window = max(2, round(window / sample_dt))
    duration = per_window * sample_dt
    exc = ExcitationSpec(
        kind=ExcitationKind.SINUSOID,
        amplitude=amplitude,
        duration=duration,
        sample_dt=sample_dt,
        f_drive=f_drive,
        profile=shape,
    )
    stream = drive_samples(state, grid, material, exc, b_dc=b_dc, field_model=field_model, dt=dt)
    next(stream)

    previous: float | None = None
    envelope = 0.0
    elapsed = 0.0
    while elapsed < max_duration:
        values = np.fromiter((mx for _t, mx in (next(stream) for _ in range(per_window))), float, per_window)
        elapsed += duration
        envelope = float(values.max() - values.min()) / 2.0
        logger.debug("Drive at %.4e Hz: t = %.3e s, envelope %.4e A/m", f_drive, elapsed, envelope)
        if elapsed >= settle and previous is not None and envelope > 0:
            if abs(envelope - previous) < tolerance * envelope:
                return envelope / amplitude
        previous = envelope
    raise SteadyStateError(
        f"⟨M_x⟩ envelope still changing after {max_duration:.3e} s of drive at {f_drive:.4e} Hz "
        f"(last envelope {envelope:.4e} A/m)"
    )
