"""The degree-4 isoparametric polynomial attached to a Clifford system.

With constraint forms g_a(x) = <P_a x, x>, the polynomial is

    F(x) = |x|^4 - 2 sum_a g_a(x)^2.

Its restriction f to the unit sphere satisfies the two isoparametric PDEs

    |grad_S f|^2 = 16 (1 - f^2),
    lap_S f      = 8 (m2 - m1) - 4 (2l + 2) f,

with multiplicities m1 = m and m2 = l - m - 1.  `verify_cartan_munzner`
checks both residuals at random unit points; everything else here supplies
the exact ambient derivatives those checks are reduced to.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.random import default_rng

from .clifford import CliffordSystem
from .errors import AdmissibilityError
from .records import VerificationRecord

__all__ = [
    "FkmPolynomial",
    "SphericalDerivatives",
    "verify_cartan_munzner",
]


@dataclass(frozen=True)
class SphericalDerivatives:
    """Restriction data at a unit point: value, tangential gradient, intrinsic Laplacian."""

    value: float
    gradient: np.ndarray
    laplacian: float


@dataclass(frozen=True)
class FkmPolynomial:
    """F(x) = |x|^4 - 2 sum_a <P_a x, x>^2 for a fixed Clifford system."""

    system: CliffordSystem

    def __post_init__(self):
        if self.system.m2 < 1:
            raise AdmissibilityError(
                f"polynomial needs m2 >= 1, got m2={self.system.m2}",
                m2=self.system.m2)

    @property
    def ambient_dim(self) -> int:
        return self.system.ambient_dim

    @property
    def m1(self) -> int:
        return self.system.m

    @property
    def m2(self) -> int:
        return self.system.m2

    def _check_shape(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.ambient_dim,):
            raise ValueError(
                f"point shape {x.shape} != ({self.ambient_dim},)")
        return x

    def constraint_values(self, x) -> np.ndarray:
        """g_a(x) = <P_a x, x> for a = 0..m."""
        x = self._check_shape(x)
        return self.system.stack @ x @ x

    def value(self, x) -> float:
        x = self._check_shape(x)
        g = self.system.stack @ x @ x
        xx = float(x @ x)
        return xx * xx - 2.0 * float(g @ g)

    def euclidean_gradient(self, x) -> np.ndarray:
        """grad F = 4 |x|^2 x - 8 sum_a g_a(x) P_a x."""
        x = self._check_shape(x)
        px = self.system.stack @ x
        g = px @ x
        return 4.0 * float(x @ x) * x - 8.0 * (g @ px)

    def euclidean_hessian_apply(self, x, v) -> np.ndarray:
        """Directional derivative of the gradient:

        Hess F(x) v = 8 <x, v> x + 4 |x|^2 v
                      - 16 sum_a <P_a x, v> P_a x - 8 sum_a g_a(x) P_a v.
        """
        x = self._check_shape(x)
        v = self._check_shape(v)
        px = self.system.stack @ x
        g = px @ x
        pv = self.system.stack @ v
        return (8.0 * float(x @ v) * x + 4.0 * float(x @ x) * v
                - 16.0 * ((px @ v) @ px) - 8.0 * (g @ pv))

    def hessian_matrix(self, x) -> np.ndarray:
        """The analytic Hessian as a dense symmetric matrix."""
        x = self._check_shape(x)
        n = self.ambient_dim
        px = self.system.stack @ x
        g = px @ x
        mat = 8.0 * np.outer(x, x) + 4.0 * float(x @ x) * np.eye(n)
        mat -= 16.0 * np.einsum("ai,aj->ij", px, px)
        mat -= 8.0 * np.einsum("a,aij->ij", g, self.system.stack)
        return mat

    def sphere_derivatives(self, x) -> SphericalDerivatives:
        """Value, intrinsic gradient and intrinsic Laplacian at a unit point.

        Both reductions follow from degree-4 homogeneity.  The sphere
        gradient is the tangential projection of the ambient gradient.  For
        the Laplacian, split the ambient operator at r = |x| = 1 into radial
        and spherical parts; with F = r^g f on rays (g = 4, ambient
        dimension n = 2l),

            lap F = lap_S f + g (g - 1) F + (n - 1) g F,

        so lap_S f = lap F - g (g + n - 2) F = lap F - 4 (2l + 2) F.  The
        ambient Laplacian is taken as the trace of the analytic Hessian.
        """
        x = self._check_shape(x)
        if abs(float(np.linalg.norm(x)) - 1.0) > 1e-12:
            raise ValueError("sphere derivatives need a unit point")
        grad = self.euclidean_gradient(x)
        grad_s = grad - float(grad @ x) * x
        value = self.value(x)
        lap = float(np.trace(self.hessian_matrix(x)))
        lap_s = lap - 4.0 * (self.ambient_dim + 2.0) * value
        return SphericalDerivatives(value=value, gradient=grad_s,
                                    laplacian=lap_s)


def verify_cartan_munzner(poly: FkmPolynomial, n_samples: int, seed: int,
                          tol: float = 1e-8) -> VerificationRecord:
    """Residuals of the two isoparametric PDEs at random unit points.

    Gradient residual: | |grad_S f|^2 - 16 (1 - f^2) |.
    Laplacian residual: | lap_S f - 8 (m2 - m1) + 4 (2l + 2) f |.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be positive")
    rng = default_rng(seed)
    n = poly.ambient_dim
    const = 8.0 * (poly.m2 - poly.m1)
    slope = 4.0 * (n + 2.0)
    worst_grad = 0.0
    worst_lap = 0.0
    for _ in range(n_samples):
        z = rng.standard_normal(n)
        nz = float(np.linalg.norm(z))
        while nz < 1e-12:
            z = rng.standard_normal(n)
            nz = float(np.linalg.norm(z))
        x = z / nz
        d = poly.sphere_derivatives(x)
        r_grad = abs(float(d.gradient @ d.gradient)
                     - 16.0 * (1.0 - d.value * d.value))
        r_lap = abs(d.laplacian - const + slope * d.value)
        worst_grad = max(worst_grad, r_grad)
        worst_lap = max(worst_lap, r_lap)
    worst = max(worst_grad, worst_lap)
    return VerificationRecord(
        name=f"cartan_munzner(m={poly.m1}, l={poly.system.l})",
        passed=worst < tol,
        max_residual=worst,
        tolerance=tol,
        details={
            "n_samples": n_samples,
            "seed": seed,
            "max_gradient_residual": worst_grad,
            "max_laplacian_residual": worst_lap,
        },
    )
