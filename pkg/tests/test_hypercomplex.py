import math

import numpy as np
import pytest

from hyperharm import clifford, fd, hypercomplex as hc
from hyperharm.harmonic import harmonicity_residual, random_ball, random_sphere
from hyperharm.report import PreconditionError


@pytest.mark.parametrize("dim", [3, 4, 8])
def test_fueter_variables_monogenic(rng, dim):
    x = random_ball(rng, 1, dim, 0.9)[0]
    for i in range(1, dim):
        assert np.abs(hc.dirac_fd(hc.fueter_variable(dim, i), x)).max() < 1e-6


def test_octonion_fueter_monogenic(rng):
    x = random_ball(rng, 1, 8, 0.9)[0]
    for i in range(1, 8):
        assert np.abs(hc.oct_dirac_fd(hc.fueter_variable(8, i, octonionic=True), x)).max() < 1e-6


@pytest.mark.parametrize("dim", [2, 3, 5])
def test_dirac_of_paravectors(rng, dim):
    # D conj(x) = 1 + n and D x = 1 - n, with n = dim - 1 generators
    x = random_ball(rng, 1, dim, 0.5)[0]
    n = dim - 1
    out = hc.dirac_fd(hc.paravector_conjugate_field(dim), x)
    expected = np.zeros(1 << n)
    expected[0] = 1 + n
    np.testing.assert_allclose(out, expected, atol=1e-8)
    ident = hc.CliffordField(dim, clifford.paravector_coeffs)
    expected[0] = 1 - n
    np.testing.assert_allclose(hc.dirac_fd(ident, x), expected, atol=1e-8)
    # conjugate operator on x gives 1 + n as well
    expected[0] = 1 + n
    np.testing.assert_allclose(hc.dirac_fd(ident, x, variant="Dbar"), expected, atol=1e-8)


def test_symmetric_products(rng):
    F = hc.fueter_symmetric_product(4, 1, 2)
    x = random_ball(rng, 1, 4, 0.8)[0]
    assert np.abs(hc.dirac_fd(F, x)).max() < 1e-6
    # components are quadratic, so the central stencil is exact up to rounding
    lap, _ = fd.laplacian(F, x)
    assert np.abs(lap).max() < 1e-8


@pytest.mark.parametrize("dim", [3, 4, 8])
def test_factorization(rng, dim):
    F = hc.random_quadratic_clifford(dim, rng)
    rep = hc.laplacian_factorization_check(F, random_ball(rng, 1, dim, 0.9)[0])
    assert rep.passed, rep


def test_octonion_factorization(rng):
    rep = hc.oct_factorization_check(hc.random_quadratic_octonion(rng), random_ball(rng, 1, 8, 0.9)[0])
    assert rep.passed, rep


def test_radius_restriction():
    F = hc.fueter_variable(3, 1)
    with pytest.raises(ValueError):
        hc.dirac_fd(F, np.array([0.97, 0.0, 0.0]))
    with pytest.raises(ValueError):
        hc.dirac_fd(F, np.zeros(3), variant="other")


def test_zhang_constant():
    assert hc.zhang_constant(1) == pytest.approx(1 + math.sqrt(2))
    assert hc.zhang_constant(6) == pytest.approx(1 / (2 ** (1 / 7) - 1))


@pytest.mark.parametrize("dim", [3, 4])
def test_admissible_field(rng, dim):
    a = random_ball(rng, 1, dim, 0.6)[0]
    F = hc.admissible_clifford_field(dim, a, rng)
    assert F.norm(a) < 1e-14
    assert F.norm(random_sphere(rng, 5000, dim)).max() <= 1.0
    x = random_ball(rng, 1, dim, 0.5)[0]
    assert harmonicity_residual(lambda y: F(y)[..., 0], x) < 1e-3


def test_schwarz_transform(rng):
    dim = 4
    a = random_ball(rng, 1, dim, 0.6)[0]
    F = hc.admissible_clifford_field(dim, a, rng)
    g, g1 = hc.schwarz_transform(F, a)
    n = dim - 1
    ra = np.linalg.norm(a)
    x = random_ball(rng, 1, dim, 0.6)[0]
    np.testing.assert_allclose(g(x), ((1 - ra) / (1 + ra)) ** ((n - 1) / 2) * g1(x), atol=1e-14)
    assert np.abs(g(np.zeros(dim))).max() < 1e-14
    assert harmonicity_residual(lambda y: g1(y)[..., 1], x) < 1e-3
    assert g.norm(random_ball(rng, 2000, dim, 0.999)).max() <= 1.0


@pytest.mark.parametrize("dim", [3, 5])
def test_zhang_checks(rng, dim):
    a = random_ball(rng, 1, dim, 0.7)[0]
    F = hc.admissible_clifford_field(dim, a, rng)
    for k, x in enumerate(hc.sample_points(dim, rng, 20)):
        reps = hc.check_zhang_improved(F, a, x, with_gradient=(k == 0))
        assert all(r.passed for r in reps), reps
        assert reps[0].rhs < reps[1].rhs
    with pytest.raises(PreconditionError):
        hc.check_zhang_improved(hc.random_quadratic_clifford(dim, rng), a, a)


def test_zhang_zero(rng):
    F = hc.admissible_clifford_field(3, np.zeros(3), rng)
    for x in hc.sample_points(3, rng, 20):
        assert hc.zhang_zero_check(F, x).passed


def test_wang(rng):
    a = random_ball(rng, 1, 8, 0.6)[0]
    F = hc.admissible_octonion_field(a, rng)
    for x in hc.sample_points(8, rng, 10):
        reps = hc.check_wang(F, a, x)
        assert all(r.passed for r in reps)
        assert reps[0].rhs < reps[1].rhs
