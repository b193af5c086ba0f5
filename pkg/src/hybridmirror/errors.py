"""Exception taxonomy shared across the package."""


class HybridMirrorError(Exception):
    """Base class for all package errors."""


class ParameterError(HybridMirrorError, ValueError):
    """A physical or dimensionless parameter is outside its domain."""


class ConfigurationError(HybridMirrorError, ValueError):
    """A run/solver configuration is infeasible (bad step, order, count...)."""


class ConsistencyError(HybridMirrorError, RuntimeError):
    """Two internally redundant computations disagree beyond tolerance.

    Raised when a cross-checked quantity (trace vs closed form, averaged
    coherence modulus vs 1/2 bound) signals an upstream bug rather than a
    user mistake.
    """


class IntegrationError(HybridMirrorError, RuntimeError):
    """Numerical integration failed (blow-up / non-finite state)."""

    def __init__(self, message: str, tau_reached: float | None = None):
        super().__init__(message)
        self.tau_reached = tau_reached
