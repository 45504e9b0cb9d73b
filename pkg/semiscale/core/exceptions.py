"""Error hierarchy for semiscale.

Every error raised on purpose by the library derives from SemiscaleError so the
CLI can map failures onto exit codes.
"""

from typing import Any


class SemiscaleError(Exception):
    """Base class for all semiscale errors."""


class EvaluationError(SemiscaleError):
    """A function produced a non-finite value."""

    def __init__(self, x: float, label: str = "", value: float | None = None):
        self.x = float(x)
        self.label = label
        self.value = value
        where = f" of '{label}'" if label else ""
        super().__init__(f"Non-finite value {value}{where} at x={self.x!r}")


class DomainError(SemiscaleError, ValueError):
    """An operation was invoked outside its domain."""


class SpectralParameterError(DomainError):
    """The spectral parameter does not exceed the growth bound."""

    def __init__(self, lam: float, bound: float):
        self.lam = lam
        self.bound = bound
        super().__init__(f"lambda={lam!r} must exceed the growth bound {bound!r}")


class ShiftRequiredError(DomainError):
    """Extrapolation needs a shifted family with negative growth bound."""

    def __init__(self, omega: float, sigma: float):
        self.omega = omega
        self.sigma = sigma
        super().__init__(
            f"omega - sigma = {omega - sigma!r} is not negative; choose sigma > {omega!r} before extrapolating"
        )


class ShiftMismatchError(SemiscaleError):
    """Objects built for different semigroup descriptors were combined."""


class ArgumentError(SemiscaleError, ValueError):
    """Invalid argument passed to a library operation."""


class ConfigError(SemiscaleError):
    """Invalid experiment configuration."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class ChainConsistencyError(SemiscaleError):
    """A classification chain violated the inclusion order."""

    def __init__(self, message: str, diagnostics: dict[str, Any] | None = None):
        self.diagnostics = diagnostics or {}
        super().__init__(message)


class NumericalFailure(SemiscaleError):
    """A sweep produced non-finite numbers."""
