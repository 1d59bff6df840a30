"""Project-wide constants for vortex-cavity.

Keep constants in a single place to avoid duplication and drift.
"""

import math
from typing import Final

from pydantic import ValidationError

from physics.errors import ConfigError, DomainError, NumericalError

# Single source of truth for the stage-cache schema. Increment when cached payloads change shape.
CACHE_VERSION: int = 1

# CODATA values; gamma/2pi follows the 28 GHz/T convention used throughout.
HBAR: Final[float] = 1.054571817e-34
MU0: Final[float] = 4e-7 * math.pi
GAMMA_OVER_2PI: Final[float] = 28e9

DEFAULT_Z0_OHM: Final[float] = 50.0
DEFAULT_STANDOFF_M: Final[float] = 10e-9
DEFAULT_FILM_THICKNESS_M: Final[float] = 150e-9
DEFAULT_LAMBDA_L_M: Final[float] = 90e-9
# One layer is a sheet at the upper film surface; more spread the current through the thickness.
DEFAULT_FILAMENT_LAYERS: Final[int] = 1
DEFAULT_XI: Final[float] = 2.0 / 3.0

# Cell edges of the reference grids: 2r/nx by t/nz.
REFERENCE_CELL_XY_M: Final[float] = 3.125e-9
REFERENCE_CELL_Z_M: Final[float] = 1.875e-9

DEFAULT_DT_S: Final[float] = 0.25e-12
DEFAULT_RELAX_ALPHA: Final[float] = 0.5
DEFAULT_TORQUE_TOLERANCE: Final[float] = 1e-5
DEFAULT_MAX_RELAX_STEPS: Final[int] = 200_000
DEFAULT_DEMAG_NEAR_CELLS: Final[int] = 32

DEFAULT_F_CUTOFF_HZ: Final[float] = 50e9
DEFAULT_SAMPLE_DT_S: Final[float] = 5e-12
DEFAULT_DURATION_S: Final[float] = 3e-6
QUICK_DURATION_S: Final[float] = 200e-9
# Sinc centre; the tails left out before it stay below 1% of the peak at the default cutoff.
DEFAULT_SINC_DELAY_S: Final[float] = 0.5e-9
MIN_BINS_ACROSS_PEAK: Final[int] = 8
# Drive amplitudes keeping the peak response below 5% of Ms for CoFe discs.
DEFAULT_SINC_AMPLITUDE_T: Final[float] = 1e-4
DEFAULT_DRIVE_AMPLITUDE_T: Final[float] = 5e-9
DEFAULT_STEADY_TOLERANCE: Final[float] = 0.01
DEFAULT_MAX_DRIVE_DURATION_S: Final[float] = 3e-6

EXIT_OK: Final[int] = 0
EXIT_IO_ERROR: Final[int] = 1
EXIT_VALIDATION_ERROR: Final[int] = 2
EXIT_NUMERICAL_ERROR: Final[int] = 3

# I/O Error-Handling Policy
# Every I/O boundary must follow ONE of:
#   (a) catch the matching error tuple, log-and-recover (return a safe default / skip)
#   (b) catch the matching error tuple, log-and-exit cleanly at the CLI boundary
# Never crash with an unhandled traceback. Never `pass` silently.
#
# Use FILESYSTEM_IO_ERRORS for filesystem operations (sha256, mkdir, read, write).
# Use VALIDATION_ERRORS for bad input caught before compute (exit code 2).
# Use NUMERICAL_ERRORS for solver and fit failures during compute (exit code 3).

FILESYSTEM_IO_ERRORS: Final[tuple[type[Exception], ...]] = (OSError, UnicodeError)

VALIDATION_ERRORS: Final[tuple[type[Exception], ...]] = (ValidationError, ConfigError, DomainError)

NUMERICAL_ERRORS: Final[tuple[type[Exception], ...]] = (NumericalError, FloatingPointError)


def exit_code_for(error: BaseException) -> int:
    """CLI exit code of a failure, following the tuples above."""
    if isinstance(error, FILESYSTEM_IO_ERRORS):
        return EXIT_IO_ERROR
    if isinstance(error, VALIDATION_ERRORS):
        return EXIT_VALIDATION_ERROR
    if isinstance(error, NUMERICAL_ERRORS):
        return EXIT_NUMERICAL_ERROR
    return EXIT_IO_ERROR
