import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperharm import inequalities as iq
from hyperharm.harmonic import AtomicHarmonic, BoundaryData, SphereQuadrature, extremal_function, random_ball, random_sphere
from hyperharm.report import INFORMATIONAL


def power_iteration(J, iters=500):
    v = np.ones(J.shape[1]) / math.sqrt(J.shape[1])
    for _ in range(iters):
        v = J.T @ (J @ v)
        v /= np.linalg.norm(v)
    return float(np.linalg.norm(J @ v))


def test_ball_volume_known():
    assert iq.ball_volume(2) == pytest.approx(math.pi)
    assert iq.ball_volume(3) == pytest.approx(4 * math.pi / 3)
    assert iq.ball_volume(4) == pytest.approx(math.pi**2 / 2)


def test_liu_constants():
    assert iq.liu_constant_exact(3) == (Fraction(3, 2), 0)
    assert iq.liu_constant(3) == 1.5
    assert abs(iq.liu_constant(2) - 4 / math.pi) < 1e-14
    assert iq.liu_constant(4) == pytest.approx(16 / (3 * math.pi), rel=1e-14)
    for n in range(2, 12):
        assert iq.liu_constant(n) == pytest.approx(2 * iq.ball_volume(n - 1) / iq.ball_volume(n), rel=1e-13)
    assert iq.gradient_constant(3) == pytest.approx(8 / (3 * math.sqrt(3)))
    assert iq.gradient_constant(5) == iq.liu_constant(5)
    with pytest.raises(ValueError):
        iq.liu_constant(1)


def test_operator_norm(rng):
    for shape in [(1, 4), (2, 3), (3, 5)]:
        J = rng.standard_normal(shape)
        assert iq.operator_norm(J) == pytest.approx(power_iteration(J), rel=1e-10)
    row = rng.standard_normal(5)
    assert abs(iq.operator_norm(row) - np.linalg.norm(row)) < 1e-12
    J = rng.standard_normal((3, 4))
    for v in random_sphere(rng, 20, 4):
        assert np.linalg.norm(J @ v) <= iq.operator_norm(J) + 1e-12
    with pytest.raises(ValueError):
        iq.operator_norm([[np.nan, 1.0]])


def test_random_rotation():
    np.testing.assert_array_equal(iq.random_rotation(3), np.eye(3))
    T = iq.random_rotation(5, seed=4)
    np.testing.assert_allclose(T @ T.T, np.eye(5), atol=1e-13)
    np.testing.assert_array_equal(T, iq.random_rotation(5, seed=4))


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 8), st.integers(0, 2**32 - 1))
def test_positive_harmonic_bounds(n, seed):
    rng = np.random.default_rng(seed)
    f = AtomicHarmonic.random(n, rng)
    x, y = random_ball(rng, 2, n, 0.97)
    assert iq.check_main_sharp(f, x).passed
    for rep in iq.check_main_ball(f, x, y):
        assert rep.passed, rep


@pytest.mark.parametrize("n", [2, 3, 6])
def test_extremal_attains_equality(rng, n):
    f = extremal_function(random_ball(rng, 1, n, 0.7)[0], random_sphere(rng, 1, n)[0], 3.0)
    for x in random_ball(rng, 10, n, 0.95):
        rep = iq.check_main_sharp(f, x)
        assert rep.passed
        assert rep.margin <= 1e-9 * rep.rhs


def test_geodesic_integral(rng):
    f = AtomicHarmonic.random(4, rng)
    x, y = random_ball(rng, 2, 4, 0.9)
    lower, upper = iq.check_geodesic_integral(f, x, y)
    assert lower.passed and upper.passed


@pytest.mark.parametrize("n", [2, 3])
def test_liu_scalar_equality_at_zero(n):
    q = SphereQuadrature.build(n)
    rep = iq.check_liu_scalar(BoundaryData.hemisphere(n), q, np.zeros(n))
    assert abs(rep.lhs - iq.liu_constant(n)) < 1e-8
    # for n = 3 the stated constant exceeds the hemisphere value
    assert rep.passed


def test_liu_scalar_random(rng):
    for n in (2, 3, 4):
        q = SphereQuadrature.build(n, 50_000 if n > 3 else None, seed=1)
        for _ in range(3):
            g = BoundaryData.random_smooth(n, 1, rng)
            assert iq.check_liu_scalar(g, q, random_ball(rng, 1, n)[0]).passed


def test_liu_vector_and_hyperbolic(rng):
    q = SphereQuadrature.build(2)
    g = BoundaryData.random_smooth(2, 3, rng)
    x, y = random_ball(rng, 2, 2)
    reps = iq.check_liu_vector(g, q, x, directions=3, rng=rng)
    assert len(reps) == 7 and all(r.passed for r in reps)
    assert iq.check_liu_hyperbolic(g, q, x, y).passed
    emb = BoundaryData.hemisphere(2, m=2)
    assert iq.check_liu_vector(emb, q, np.zeros(2))[0].lhs == pytest.approx(4 / math.pi, abs=1e-12)


def test_n3_rejected():
    q = SphereQuadrature.build(3)
    g = BoundaryData.hemisphere(3, m=2)
    with pytest.raises(iq.DimensionError):
        iq.check_liu_vector(g, q, np.zeros(3))
    with pytest.raises(iq.DimensionError):
        iq.check_liu_hyperbolic(g, q, np.zeros(3), np.full(3, 0.1))


def test_kalaj_vuorinen(rng):
    q = SphereQuadrature.build(2)
    h = BoundaryData.hemisphere(2)
    for variant in ("original", "chen"):
        rep = iq.check_kalaj_vuorinen(h, q, np.zeros(2), variant)
        assert abs(rep.margin) < 1e-10  # sharp at the hemisphere extremal
    g = BoundaryData.random_smooth(2, 1, rng)
    z = random_ball(rng, 1, 2)[0]
    orig = iq.check_kalaj_vuorinen(g, q, z, "original")
    chen = iq.check_kalaj_vuorinen(g, q, z, "chen")
    assert orig.passed and chen.passed and chen.rhs <= orig.rhs + 1e-15
    with pytest.raises(iq.DimensionError):
        iq.check_kalaj_vuorinen(BoundaryData.hemisphere(3), SphereQuadrature.build(3), np.zeros(3))
    with pytest.raises(ValueError):
        iq.check_kalaj_vuorinen(g, q, z, "other")


def test_probe_is_informational(rng):
    q = SphereQuadrature.build(4, 20_000, seed=3)
    rep = iq.probe_search(4, q, rng, trials=3)
    assert rep.regime == INFORMATIONAL and not rep.asserting
    with pytest.raises(iq.DimensionError):
        iq.counterexample_probe_conjecture(BoundaryData.hemisphere(3), SphereQuadrature.build(3), np.zeros(3))
