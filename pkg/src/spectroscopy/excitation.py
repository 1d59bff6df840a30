"""Drive protocols and the time-domain runs that record ⟨M_x⟩(τ)."""

import logging
import math
from collections.abc import Iterator
from enum import StrEnum
from itertools import islice
from typing import Self

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from constants import DEFAULT_DT_S, DEFAULT_F_CUTOFF_HZ, DEFAULT_SAMPLE_DT_S, DEFAULT_SINC_DELAY_S
from micromag.fields import FieldModel
from micromag.grid import MagGrid, Magnetization
from micromag.llg import llg_step
from physics.errors import DomainError
from physics.models import MaterialParams

logger = logging.getLogger(__name__)


class ExcitationKind(StrEnum):
    SINC = "sinc-broadband"
    SINUSOID = "sinusoid-resonant"


class ExcitationSpec(BaseModel):
    """A drive b(x, y, τ) = profile(x, y)·b(τ).

    ``profile`` is a per-cell field shape in units of the amplitude; None means a
    uniform field along x.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    kind: ExcitationKind = Field(..., description="Broadband sinc pulse or resonant sinusoid")
    amplitude: float = Field(..., ge=0, description="Peak drive amplitude A, T")
    duration: float = Field(..., gt=0, description="Recorded trace length, s")
    sample_dt: float = Field(default=DEFAULT_SAMPLE_DT_S, gt=0, description="Sampling interval, s")
    f_cutoff: float = Field(default=DEFAULT_F_CUTOFF_HZ, gt=0, description="Sinc cutoff frequency, Hz")
    f_drive: float | None = Field(default=None, gt=0, description="Sinusoid frequency, Hz")
    delay: float | None = Field(
        default=None, ge=0, description="Sinc centre τ0, s; None picks the smaller of 0.5 ns and half the trace"
    )
    profile: np.ndarray | None = Field(default=None, description="(nx, ny, nz, 3) field shape per unit amplitude")

    @model_validator(mode="after")
    def _check_sampling(self) -> Self:
        if self.kind is ExcitationKind.SINUSOID and self.f_drive is None:
            raise ValueError("a resonant sinusoid needs f_drive")
        highest = self.f_cutoff if self.kind is ExcitationKind.SINC else self.f_drive or 0.0
        if self.sample_dt >= 1.0 / (2.0 * highest):
            raise ValueError(
                f"sample_dt {self.sample_dt:.3e} s violates Nyquist for {highest:.3e} Hz"
            )
        if self.delay is not None and self.delay > self.duration:
            raise ValueError(f"sinc delay {self.delay:.3e} s falls outside the {self.duration:.3e} s trace")
        ratio = self.duration / self.sample_dt
        if abs(ratio - round(ratio)) > 1e-6 * ratio:
            raise ValueError("duration must be an integer number of samples")
        return self

    @property
    def n_samples(self) -> int:
        return round(self.duration / self.sample_dt)

    @property
    def pulse_center(self) -> float:
        """τ0 of the sinc pulse, s."""
        if self.delay is not None:
            return self.delay
        return min(DEFAULT_SINC_DELAY_S, self.duration / 2.0)

    def waveform(self, t: float) -> float:
        """Scalar drive b(τ): A·sinc(2π f_cutoff (τ − τ0)) or A·sin(2π f_drive τ), T."""
        if self.kind is ExcitationKind.SINC:
            return float(self.amplitude * np.sinc(2.0 * self.f_cutoff * (t - self.pulse_center)))
        assert self.f_drive is not None
        return self.amplitude * math.sin(2.0 * math.pi * self.f_drive * t)

    def shape(self, grid: MagGrid) -> np.ndarray:
        if self.profile is not None:
            return self.profile
        shape = np.zeros((*grid.shape, 3))
        shape[..., 0] = 1.0
        return shape

    def with_amplitude(self, amplitude: float) -> "ExcitationSpec":
        return self.model_copy(update={"amplitude": amplitude})


class TimeSeries(BaseModel):
    """Uniformly sampled spatial average ⟨M_x⟩(τ)."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    times: np.ndarray = Field(..., description="Sample times, s")
    mx_avg: np.ndarray = Field(..., description="Spatially averaged M_x, A/m")

    @model_validator(mode="after")
    def _check_samples(self) -> Self:
        if self.times.shape != self.mx_avg.shape or self.times.size < 2:
            raise ValueError("times and mx_avg must be equal-length series of at least two samples")
        steps = np.diff(self.times)
        if not np.allclose(steps, steps[0], rtol=1e-6):
            raise ValueError("time series must be uniformly sampled")
        if not np.isfinite(self.mx_avg).all():
            raise ValueError("time series holds non-finite values")
        return self

    @property
    def sample_dt(self) -> float:
        return float(self.times[1] - self.times[0])

    @property
    def duration(self) -> float:
        return self.sample_dt * (self.times.size - 1)


def steps_per_sample(sample_dt: float, dt: float) -> int:
    ratio = sample_dt / dt
    if ratio < 1 or abs(ratio - round(ratio)) > 1e-6 * ratio:
        raise DomainError(f"sample_dt {sample_dt:.3e} s must be a whole multiple of dt {dt:.3e} s")
    return round(ratio)


def drive_samples(
    state: Magnetization,
    grid: MagGrid,
    material: MaterialParams,
    exc: ExcitationSpec,
    *,
    b_dc: float = 0.0,
    field_model: FieldModel | None = None,
    dt: float = DEFAULT_DT_S,
) -> Iterator[tuple[float, float]]:
    """Integrate LLG with the material damping under the drive, yielding (τ, ⟨M_x⟩) every sample_dt.

    The first item is the undriven state at τ = 0; the stream is unbounded.
    """
    model = field_model or FieldModel(grid, material)
    shape = exc.shape(grid)
    static = np.zeros((*grid.shape, 3))
    static[..., 2] = b_dc

    def field(m: np.ndarray, t: float) -> np.ndarray:
        return model.total(m, static + exc.waveform(t) * shape)

    stride = steps_per_sample(exc.sample_dt, dt)
    mag = state
    step = 0
    yield 0.0, float(mag.average(grid)[0])
    while True:
        for _ in range(stride):
            mag = llg_step(mag, field, material.alpha_llg, dt, grid=grid, t=step * dt, step=step)
            step += 1
        yield step * dt, float(mag.average(grid)[0])


def run_excitation(
    state: Magnetization,
    grid: MagGrid,
    material: MaterialParams,
    exc: ExcitationSpec,
    *,
    b_dc: float = 0.0,
    field_model: FieldModel | None = None,
    dt: float = DEFAULT_DT_S,
) -> TimeSeries:
    """Record ⟨M_x⟩(τ) over the full excitation duration."""
    samples = []
    stream = drive_samples(state, grid, material, exc, b_dc=b_dc, field_model=field_model, dt=dt)
    for index, (_t, mx) in enumerate(islice(stream, exc.n_samples + 1)):
        samples.append(mx)
        if index and index % 1000 == 0:
            logger.debug("Drive %s: %d/%d samples", exc.kind.value, index, exc.n_samples)
    times = np.arange(exc.n_samples + 1) * exc.sample_dt
    return TimeSeries(times=times, mx_avg=np.asarray(samples))
