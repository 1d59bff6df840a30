"""Vacuum Rabi oscillations in the single-excitation subspace."""

from enum import StrEnum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.linalg import expm

from cavity.system import TwoModeSystem, dissipative_matrix
from physics.errors import DomainError


class Excitation(StrEnum):
    PHOTON = "photon"
    VORTEX = "vortex"


class RabiTrace(BaseModel):

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    times: np.ndarray = Field(..., description="Sample times, s")
    photon: np.ndarray = Field(..., description="Photon population")
    vortex: np.ndarray = Field(..., description="Gyration-quantum population")

    @property
    def total(self) -> np.ndarray:
        return self.photon + self.vortex

    def to_csv(self) -> str:
        rows = ["t_s,photon,vortex"]
        columns = zip(self.times.tolist(), self.photon.tolist(), self.vortex.tolist())
        rows += [f"{t!r},{p!r},{v!r}" for t, p, v in columns]
        return "\n".join(rows) + "\n"


def rabi_dynamics(
    sys: TwoModeSystem,
    initial: Excitation,
    duration: float,
    *,
    n_points: int = 1001,
    damped: bool = False,
) -> RabiTrace:
    """Populations after placing one quantum in ``initial``.

    Without ``damped`` the evolution is unitary; with it each amplitude also
    decays at π times its mode's linewidth.
    """
    if duration <= 0 or n_points < 2:
        raise DomainError("need a positive duration and at least two samples")
    if not damped:
        sys = sys.model_copy(update={"kappa": 0.0, "delta_f_G": 0.0})
    generator = dissipative_matrix(sys)
    # The mean frequency only contributes a global phase.
    generator -= 0.5 * (sys.f_cpw + sys.f_G) * np.eye(2)
    state = np.zeros(2, dtype=complex)
    state[0 if initial is Excitation.PHOTON else 1] = 1.0
    times = np.linspace(0.0, duration, n_points)
    amplitudes = np.array([expm(-2j * np.pi * generator * t) @ state for t in times])
    populations = np.abs(amplitudes) ** 2
    return RabiTrace(times=times, photon=populations[:, 0], vortex=populations[:, 1])
