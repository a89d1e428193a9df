"""Exception types raised by the verification pipeline.

Everything here signals a *detected* problem: either the requested
configuration is impossible, or a numerical routine left its guaranteed
regime.  Identity checks that merely come out false never raise; they are
reported through records and the report module.
"""

from __future__ import annotations

__all__ = [
    "AdmissibilityError",
    "CertificationError",
    "ConvergenceError",
    "FrameError",
    "MultiplicityError",
    "SamplingError",
    "SingularityError",
    "SpectrumError",
]


class AdmissibilityError(ValueError):
    """The requested pair (m, k) leaves no room for a focal manifold.

    Carries the computed second multiplicity m2 = l - m - 1, which must be
    at least 1 for the construction to make sense.
    """

    def __init__(self, message: str, m2: int | None = None):
        super().__init__(message)
        self.m2 = m2


class CertificationError(RuntimeError):
    """A candidate point failed the fixed certification thresholds."""

    def __init__(self, message: str, residual_constraints: float = 0.0,
                 residual_sphere: float = 0.0):
        super().__init__(message)
        self.residual_constraints = residual_constraints
        self.residual_sphere = residual_sphere


class ConvergenceError(RuntimeError):
    """Projection ran out of iterations; carries the last residual."""

    def __init__(self, message: str, residual: float = float("inf")):
        super().__init__(message)
        self.residual = residual


class SingularityError(RuntimeError):
    """The projection's normal equations became numerically singular."""


class SamplingError(RuntimeError):
    """A sample point could not be produced after all retries."""

    def __init__(self, message: str, failures: int = 0):
        super().__init__(message)
        self.failures = failures


class FrameError(RuntimeError):
    """An assembled frame failed its orthonormality check."""


class SpectrumError(RuntimeError):
    """A shape-operator eigenvalue landed outside every expected cluster."""


class MultiplicityError(RuntimeError):
    """Eigenvalue clusters have the wrong sizes."""
