"""Small result record shared by the verification routines."""

from __future__ import annotations

from dataclasses import dataclass, field

__all__ = ["VerificationRecord"]


@dataclass(frozen=True)
class VerificationRecord:
    """Outcome of one numerical check.

    `max_residual` is the worst deviation observed, `tolerance` the bound it
    was held against.  `details` carries named sub-residuals and bookkeeping
    values for the report.
    """

    name: str
    passed: bool
    max_residual: float
    tolerance: float
    details: dict = field(default_factory=dict)

    def __repr__(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"[{status}] {self.name}: max residual {self.max_residual:.3e} "
                f"(tol {self.tolerance:.1e})")
