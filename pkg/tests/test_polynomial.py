"""Quartic polynomial: values, derivatives vs finite differences, sphere PDEs."""

import numpy as np
import pytest
from numpy.random import default_rng

from fkm_willmore import (AdmissibilityError, CliffordSystem, FkmPolynomial,
                          build_clifford_system, build_skew_generators,
                          deterministic_seed, verify_cartan_munzner)

from conftest import FD_RTOL, GRID, corrupt_system, fd_directional, fd_gradient, rel_err


def _poly(m, k):
    return FkmPolynomial(build_clifford_system(m, k))


def test_value_at_origin_and_axis():
    poly = _poly(1, 3)
    assert poly.value(np.zeros(6)) == 0.0
    # e_1 lies in the +1 eigenspace of P_0: g_0 = 1, so F = 1 - 2 = -1
    e1 = np.eye(6)[0]
    assert poly.value(e1) == -1.0


@pytest.mark.parametrize("m,k", GRID)
def test_value_one_on_focal_seed(m, k):
    system = build_clifford_system(m, k)
    poly = FkmPolynomial(system)
    x = deterministic_seed(system).x
    assert abs(poly.value(x) - 1.0) <= 1e-15


def test_degree_four_homogeneity():
    # scale factors spanning two decades; error budget grows with the
    # magnitude of t^4 F(x)
    poly = _poly(2, 2)
    rng = default_rng(5)
    for _ in range(40):
        x = rng.standard_normal(8)
        t = float(rng.uniform(0.1, 10.0))
        want = t ** 4 * poly.value(x)
        assert abs(poly.value(t * x) - want) <= 1e-10 * (1.0 + abs(want))


@pytest.mark.parametrize("m,k", [(1, 3), (2, 2), (3, 2)])
def test_gradient_matches_finite_differences(m, k):
    poly = _poly(m, k)
    n = poly.ambient_dim
    rng = default_rng(100 + m)
    for _ in range(34):
        x = rng.standard_normal(n)
        grad = poly.euclidean_gradient(x)
        want = fd_gradient(poly.value, x)
        assert rel_err(grad, want) <= FD_RTOL, f"at |x|={np.linalg.norm(x):.2f}"


@pytest.mark.parametrize("m,k", [(1, 3), (2, 2), (3, 2)])
def test_hessian_matches_finite_differences(m, k):
    poly = _poly(m, k)
    n = poly.ambient_dim
    rng = default_rng(200 + m)
    for _ in range(34):
        x = rng.standard_normal(n)
        v = rng.standard_normal(n)
        v /= np.linalg.norm(v)
        hv = poly.euclidean_hessian_apply(x, v)
        assert rel_err(hv, fd_directional(poly.euclidean_gradient, x, v)) <= FD_RTOL
        # matrix route agrees with the matrix-free apply
        assert rel_err(poly.hessian_matrix(x) @ v, hv) <= 1e-12


def test_hessian_symmetric():
    poly = _poly(2, 2)
    rng = default_rng(17)
    x = rng.standard_normal(8)
    h = poly.hessian_matrix(x)
    assert np.max(np.abs(h - h.T)) <= 1e-12 * max(1.0, np.max(np.abs(h)))


@pytest.mark.parametrize("m,k", GRID)
def test_euclidean_laplacian_closed_form(m, k):
    # trace of the Hessian must be 8 (l - 2m - 1) |x|^2 everywhere
    poly = _poly(m, k)
    system = poly.system
    rng = default_rng(300 + m * 10 + k)
    for _ in range(10):
        x = rng.standard_normal(system.ambient_dim)
        lap = float(np.trace(poly.hessian_matrix(x)))
        want = 8.0 * (system.l - 2 * m - 1) * float(x @ x)
        assert rel_err(lap, want) <= 1e-12


@pytest.mark.parametrize("m,k", GRID)
def test_sphere_derivatives_pointwise(m, k):
    poly = _poly(m, k)
    m1, m2 = poly.m1, poly.m2
    n = poly.ambient_dim
    rng = default_rng(400 + m * 10 + k)
    for _ in range(25):
        x = rng.standard_normal(n)
        x /= np.linalg.norm(x)
        der = poly.sphere_derivatives(x)
        assert abs(float(der.gradient @ x)) <= 1e-12, "gradient not tangent"
        grad_sq = float(der.gradient @ der.gradient)
        assert abs(grad_sq - 16.0 * (1.0 - der.value ** 2)) <= 1e-10
        want_lap = 8.0 * (m2 - m1) - 4.0 * (2 * poly.system.l + 2) * der.value
        assert abs(der.laplacian - want_lap) <= 1e-10


def test_sphere_derivatives_on_focal_point():
    system = build_clifford_system(1, 3)
    poly = FkmPolynomial(system)
    der = poly.sphere_derivatives(deterministic_seed(system).x)
    assert abs(der.value - 1.0) <= 1e-15
    assert float(np.linalg.norm(der.gradient)) <= 1e-7
    # m1 = m2 = 1, so the linear term vanishes and lap = -4 (2l + 2) = -32
    assert abs(der.laplacian + 32.0) <= 1e-12


def test_sphere_derivatives_reject_off_sphere():
    poly = _poly(1, 3)
    with pytest.raises(ValueError):
        poly.sphere_derivatives(np.full(6, 0.8))


@pytest.mark.parametrize("m,k", [(1, 3), (2, 2)])
def test_cartan_munzner_record(m, k):
    poly = _poly(m, k)
    rec = verify_cartan_munzner(poly, n_samples=200, seed=31)
    assert rec.passed
    assert rec.max_residual <= 1e-10
    assert rec.details["n_samples"] == 200
    again = verify_cartan_munzner(poly, n_samples=200, seed=31)
    assert again.max_residual == rec.max_residual, "seeded run must reproduce"


def test_cartan_munzner_detects_corruption():
    poly = FkmPolynomial(corrupt_system(2, 2))
    rec = verify_cartan_munzner(poly, n_samples=200, seed=31)
    assert not rec.passed
    assert rec.max_residual >= 1e-5


def test_polynomial_rejects_inadmissible_system():
    # a valid Clifford system with m2 = 0 admits the polynomial but no
    # focal manifold of the verified kind; the constructor refuses it
    gens = build_skew_generators(3)
    eye = np.eye(4)
    zero = np.zeros((4, 4))
    mats = [np.block([[eye, zero], [zero, -eye]]),
            np.block([[zero, eye], [eye, zero]])]
    for e in gens.matrices:
        mats.append(np.block([[zero, e], [-e, zero]]))
    system = CliffordSystem(m=3, l=4, matrices=tuple(mats))
    with pytest.raises(AdmissibilityError):
        FkmPolynomial(system)
