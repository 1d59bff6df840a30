"""Truncated two-oscillator Hamiltonian including the counter-rotating coupling."""

import logging

import numpy as np
from qutip import destroy, qeye, tensor

from cavity.system import TwoModeSystem
from physics.errors import CutoffError, DomainError

logger = logging.getLogger(__name__)

MIN_CUTOFF = 4
DEFAULT_CUTOFF = 8
# Largest relative doublet change tolerated when the cutoff grows by two quanta.
CUTOFF_TOLERANCE = 1e-3


def _levels(sys: TwoModeSystem, n_max: int) -> np.ndarray:
    """Excitation frequencies above the ground state, Hz, ascending."""
    dim = n_max + 1
    a = tensor(destroy(dim), qeye(dim))
    v = tensor(qeye(dim), destroy(dim))
    scale = sys.f_cpw
    h = (
        (sys.f_cpw / scale) * a.dag() * a
        + (sys.f_G / scale) * v.dag() * v
        + (sys.g_hz / scale) * (a + a.dag()) * (v + v.dag())
    )
    energies = np.sort(h.eigenenergies())
    return (energies - energies[0]) * scale


def lowest_doublet(levels: np.ndarray) -> tuple[float, float]:
    """(f+, f−) of the first excitation manifold."""
    return float(levels[2]), float(levels[1])


def full_hamiltonian_spectrum(sys: TwoModeSystem, n_max: int = DEFAULT_CUTOFF) -> np.ndarray:
    """Excitation frequencies of f_cpw·a†a + f_G·v†v + g·(a + a†)(v + v†) with n_max quanta per mode.

    Raises CutoffError when adding two quanta moves the lowest doublet by more than
    CUTOFF_TOLERANCE relative.
    """
    if n_max < MIN_CUTOFF:
        raise DomainError(f"photon-number cutoff must be at least {MIN_CUTOFF}, got {n_max}")
    levels = _levels(sys, n_max)
    wider = _levels(sys, n_max + 2)
    change = max(
        abs(new - old) / old for old, new in zip(lowest_doublet(levels), lowest_doublet(wider))
    )
    logger.debug("Cutoff %d: lowest doublet moves %.2e relative at cutoff %d", n_max, change, n_max + 2)
    if change > CUTOFF_TOLERANCE:
        raise CutoffError(
            f"lowest doublet changes by {change:.2e} relative from cutoff {n_max} to {n_max + 2}; raise n_max"
        )
    return levels
