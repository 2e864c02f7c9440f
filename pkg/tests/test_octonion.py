import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperharm import octonion
from hyperharm.octonion import Octonion, oct_conj, oct_mul


def rand(seed):
    rng = np.random.default_rng(seed)
    return [Octonion(rng.standard_normal(8)) for _ in range(3)]


def test_units_square_to_minus_one():
    for i in range(1, 8):
        assert (Octonion.unit(i) * Octonion.unit(i)).allclose(-1.0)
        for j in range(1, 8):
            if i != j:
                # distinct imaginary units anticommute
                assert (Octonion.unit(i) * Octonion.unit(j)).allclose(-(Octonion.unit(j) * Octonion.unit(i)))


def test_table_is_signed_permutation():
    sign, index = octonion.product_table()
    for row in index:
        assert sorted(row) == list(range(8))
    assert set(np.unique(sign)) <= {-1, 1}


def test_not_associative():
    e1, e2, e4 = Octonion.unit(1), Octonion.unit(2), Octonion.unit(4)
    assert ((e1 * e2) * e4).allclose(-(e1 * (e2 * e4)))


def test_quaternion_subalgebra_matches_hamilton():
    # coordinates 0..3 form the quaternions with i j = k
    i, j, k = Octonion.unit(1), Octonion.unit(2), Octonion.unit(3)
    assert (i * j).allclose(k)
    assert (j * k).allclose(i)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_composition_alternativity_moufang(seed):
    a, b, c = rand(seed)
    assert abs(a * b) == pytest.approx(abs(a) * abs(b), rel=1e-12)
    assert (a * (a * b)).allclose((a * a) * b, atol=1e-10)
    assert ((a * b) * b).allclose(a * (b * b), atol=1e-10)
    assert ((a * b) * (c * a)).allclose(a * ((b * c) * a), atol=1e-9)
    assert oct_conj(a * b).allclose(oct_conj(b) * oct_conj(a), atol=1e-10)


def test_inverse_by_conjugate(rng):
    a = Octonion(rng.standard_normal(8))
    inv = oct_conj(a) * (1.0 / abs(a) ** 2)
    assert oct_mul(a, inv).allclose(1.0, atol=1e-13)


def test_shape_error():
    with pytest.raises(ValueError):
        Octonion(np.zeros(4))
