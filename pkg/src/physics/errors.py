"""Exception types shared across the simulation packages."""


class DomainError(ValueError):
    """Raised when a closed-form relation is evaluated outside its domain."""


class ConfigError(ValueError):
    """Raised when a configuration file or override is malformed or names an unknown key."""


class NumericalError(RuntimeError):
    """Base class for every solver or fitting failure."""


class IntegrationError(NumericalError):
    """Raised when the LLG integrator produces a non-finite field or magnetization."""

    def __init__(self, message: str, step: int) -> None:
        super().__init__(f"{message} (step {step})")
        self.step = step


class ConvergenceError(NumericalError):
    """Raised when relaxation does not reach the torque tolerance within the step budget."""

    def __init__(self, message: str, residual: float) -> None:
        super().__init__(f"{message} (residual torque {residual:.3e})")
        self.residual = residual


class NotAVortexError(NumericalError):
    """Raised when a magnetization state contains no vortex core."""


class VortexLostError(NumericalError):
    """Raised when a field sweep no longer relaxes into the seeded vortex."""

    def __init__(self, message: str, b_dc: float) -> None:
        super().__init__(f"{message} (B_dc = {b_dc * 1e3:.1f} mT)")
        self.b_dc = b_dc


class SteadyStateError(NumericalError):
    """Raised when a resonant drive does not reach a steady envelope within the allowed duration."""


class CutoffError(NumericalError):
    """Raised when a truncated Fock space is too small for converged eigenfrequencies."""


class FitError(NumericalError):
    """Base class for curve-fit failures."""


class NoPeakError(FitError):
    """Raised when a spectrum window holds no resolvable peak."""


class InsufficientResolutionError(FitError):
    """Raised when a peak spans too few frequency bins; a longer trace is needed."""


class FitResidualError(FitError):
    """Raised when a fit exceeds its pointwise residual threshold."""

    def __init__(self, message: str, residuals: list[tuple[float, float]]) -> None:
        table = ", ".join(f"{x:.3e}: {res:+.2%}" for x, res in residuals)
        super().__init__(f"{message} [{table}]")
        self.residuals = residuals
