"""Exception types shared across the package."""


class MusselbedError(Exception):
    """Base class for all package-specific errors."""


class HypothesisError(MusselbedError):
    """A structural hypothesis required by the requested computation fails.

    Raised when parameters do not admit the object being asked for: no
    coexistence state, no delay-induced crossing, a mode that is already
    unstable without delay, and similar.
    """


class NumericalError(MusselbedError):
    """A numerical procedure failed: blow-up, divergence, or a singular solve."""
