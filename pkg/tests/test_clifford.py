import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperharm import clifford
from hyperharm.clifford import MultiVector, SingularElementError, blade_mul, mv_conj, mv_inverse


def word_product(A, B):
    """Oracle: multiply generator words literally by bubble sorting, e_i e_i = -1."""
    word = [i for i in range(16) if A >> i & 1] + [i for i in range(16) if B >> i & 1]
    sign = 1
    changed = True
    while changed:
        changed = False
        for k in range(len(word) - 1):
            if word[k] > word[k + 1]:
                word[k], word[k + 1] = word[k + 1], word[k]
                sign = -sign
                changed = True
    out = []
    for g in word:
        if out and out[-1] == g:
            out.pop()
            sign = -sign
        else:
            out.append(g)
    return sign, sum(1 << g for g in out)


def test_blade_mul_matches_word_oracle():
    for A in range(32):
        for B in range(32):
            assert blade_mul(A, B) == word_product(A, B)


def test_table_matches_blade_mul():
    sign, index = clifford.product_table(4)
    for A in range(16):
        for B in range(16):
            assert (int(sign[A, B]), int(index[A, B])) == blade_mul(A, B)


def test_hand_values():
    e1, e2, e3 = 1, 2, 4
    assert blade_mul(e1, e1) == (-1, 0)
    assert blade_mul(e1, e2) == (1, e1 | e2)
    assert blade_mul(e2, e1) == (-1, e1 | e2)
    # e1e2 * e2e3 = e1 (e2 e2) e3 = -e1e3
    assert blade_mul(e1 | e2, e2 | e3) == (-1, e1 | e3)
    u = MultiVector.generator(1, 2) + MultiVector.generator(2, 2)
    v = MultiVector.generator(1, 2) - MultiVector.generator(2, 2)
    assert (u * v).allclose(MultiVector.blade(3, 2, -2.0))


def test_quaternions():
    # R_{0,2} is the quaternions with i = e1, j = e2, k = e1e2
    i, j = MultiVector.generator(1, 2), MultiVector.generator(2, 2)
    k = i * j
    assert (k * k).allclose(-1.0)
    assert (j * k).allclose(i) and (k * i).allclose(j)


def test_unit_and_scalars():
    a = MultiVector(3, np.arange(8.0))
    assert (a * 1.0).allclose(a)
    assert (MultiVector.scalar(1.0, 3) * a).allclose(a)
    assert (2.0 * a - a).allclose(a)


def test_conj_signs():
    # conj acts on grade k by (-1)^{k(k+1)/2}: + - - + + - - +
    np.testing.assert_array_equal(clifford.conj_signs(3)[[0, 1, 3, 7]], [1, -1, -1, 1])
    x = MultiVector.paravector([1.0, 2.0, 3.0])
    np.testing.assert_allclose(mv_conj(x).vector(), [1.0, -2.0, -3.0])


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_associative_and_conj_reverses(m, seed):
    rng = np.random.default_rng(seed)
    a, b, c = (MultiVector(m, rng.standard_normal(1 << m)) for _ in range(3))
    assert ((a * b) * c).allclose(a * (b * c), atol=1e-10)
    assert mv_conj(a * b).allclose(mv_conj(b) * mv_conj(a), atol=1e-10)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 7), st.integers(0, 2**32 - 1))
def test_paravector_modulus(m, seed):
    rng = np.random.default_rng(seed)
    a = MultiVector(m, rng.standard_normal(1 << m))
    x = MultiVector.paravector(rng.standard_normal(m + 1))
    expected = abs(a) * abs(x)
    assert abs(a * x) == pytest.approx(expected, rel=1e-12)
    assert abs(x * a) == pytest.approx(expected, rel=1e-12)


def test_paravector_inverse_is_conj_over_norm(rng):
    x = MultiVector.paravector(rng.standard_normal(5))
    inv = mv_inverse(x)
    assert inv.allclose(mv_conj(x) / abs(x) ** 2, atol=1e-12)
    assert (x * inv).allclose(1.0, atol=1e-12)


def test_singular_element():
    # (1 + e1e2e3)(1 - e1e2e3) = 0 in R_{0,3}
    z = MultiVector.scalar(1.0, 3) + MultiVector.blade(7, 3)
    with pytest.raises(SingularElementError):
        mv_inverse(z)
    with pytest.raises(SingularElementError):
        mv_inverse(MultiVector.scalar(0.0, 2))


def test_errors():
    with pytest.raises(ValueError):
        clifford.product_table(clifford.MAX_GENERATORS + 1)
    with pytest.raises(ValueError):
        MultiVector(2, np.zeros(3))
    with pytest.raises(ValueError):
        MultiVector.scalar(1.0, 2) * MultiVector.scalar(1.0, 3)


def test_left_regular_matrix(rng):
    a, b = rng.standard_normal((2, 16))
    L = clifford.left_regular_matrix(a, 4)
    np.testing.assert_allclose(L @ b, clifford.mul_coeffs(a, b, 4), atol=1e-13)


def test_paravector_roundtrip(rng):
    x = rng.standard_normal((3, 6))
    np.testing.assert_array_equal(clifford.vector_part(clifford.paravector_coeffs(x), 5), x)
