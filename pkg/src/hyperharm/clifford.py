"""Dense arithmetic in the real Clifford algebra R_{0,m}.

Basis blades e_A are addressed by bit-sets: generator e_i (1 <= i <= m) is bit
``i - 1`` and the empty set is the unit.  All generators square to -1.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _kernels

MAX_GENERATORS = 12


class SingularElementError(ValueError):
    """The multivector has no (numerically trustworthy) inverse."""


def blade_mul(A: int, B: int) -> tuple[int, int]:
    """Return ``(sign, C)`` with ``e_A e_B = sign * e_C``."""
    # transpositions needed to merge the two sorted generator words
    swaps = 0
    a = A >> 1
    while a:
        swaps += bin(a & B).count("1")
        a >>= 1
    # every shared generator contracts to e_i^2 = -1
    swaps += bin(A & B).count("1")
    return (-1 if swaps & 1 else 1), A ^ B


@lru_cache(maxsize=None)
def product_table(m: int) -> tuple[np.ndarray, np.ndarray]:
    """Sign and index tables of the blade product for ``m`` generators."""
    if not 0 <= m <= MAX_GENERATORS:
        raise ValueError(f"generator count must lie in [0, {MAX_GENERATORS}], got {m}")
    D = 1 << m
    idx = np.arange(D)
    index = idx[:, None] ^ idx[None, :]
    swaps = np.zeros((D, D), dtype=np.int64)
    shifted = idx >> 1
    while shifted.any():
        swaps += _popcount(shifted[:, None] & idx[None, :])
        shifted >>= 1
    swaps += _popcount(idx[:, None] & idx[None, :])
    sign = np.where(swaps & 1, -1, 1).astype(np.int8)
    sign.flags.writeable = False
    index.flags.writeable = False
    return sign, index


def _popcount(v):
    v = v.copy()
    c = np.zeros_like(v)
    while v.any():
        c += v & 1
        v >>= 1
    return c


@lru_cache(maxsize=None)
def grades(m: int) -> np.ndarray:
    return _popcount(np.arange(1 << m))


@lru_cache(maxsize=None)
def conj_signs(m: int) -> np.ndarray:
    k = grades(m)
    return np.where((k * (k + 1) // 2) % 2, -1.0, 1.0)


def _check_m(m):
    if not 0 <= m <= MAX_GENERATORS:
        raise ValueError(f"generator count must lie in [0, {MAX_GENERATORS}], got {m}")


# ---------------------------------------------------------------------------
# array-level API: coefficient arrays with a trailing axis of length 2**m
# ---------------------------------------------------------------------------


def mul_coeffs(a, b, m: int) -> np.ndarray:
    sign, index = product_table(m)
    return _kernels.table_product(a, b, sign, index)


def conj_coeffs(a, m: int) -> np.ndarray:
    return np.asarray(a) * conj_signs(m)


def norm_coeffs(a) -> np.ndarray:
    a = np.asarray(a)
    return np.sqrt(np.einsum("...i,...i->...", a, a))


def paravector_coeffs(x) -> np.ndarray:
    """Embed points of R^{m+1} (trailing axis) as paravectors x0 + sum x_i e_i."""
    x = np.asarray(x, dtype=np.float64)
    m = x.shape[-1] - 1
    _check_m(m)
    out = np.zeros(x.shape[:-1] + (1 << m,))
    out[..., 0] = x[..., 0]
    for i in range(1, m + 1):
        out[..., 1 << (i - 1)] = x[..., i]
    return out


def vector_part(a, m: int) -> np.ndarray:
    """Inverse of :func:`paravector_coeffs` (drops all grades above one)."""
    a = np.asarray(a)
    return np.stack([a[..., 0]] + [a[..., 1 << (i - 1)] for i in range(1, m + 1)], axis=-1)


def left_regular_matrix(a, m: int) -> np.ndarray:
    """Matrix L with ``L @ b == coeffs(a * b)``."""
    sign, index = product_table(m)
    D = 1 << m
    L = np.zeros((D, D))
    a = np.asarray(a, dtype=np.float64)
    cols = np.arange(D)
    for A in np.flatnonzero(a):
        L[index[A], cols] += sign[A] * a[A]
    return L


# ---------------------------------------------------------------------------
# value type
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class MultiVector:
    m: int
    coeffs: np.ndarray

    def __post_init__(self):
        _check_m(self.m)
        c = np.array(self.coeffs, dtype=np.float64)
        if c.shape != (1 << self.m,):
            raise ValueError(f"expected {1 << self.m} coefficients for m={self.m}, got shape {c.shape}")
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def scalar(cls, value, m):
        c = np.zeros(1 << m)
        c[0] = value
        return cls(m, c)

    @classmethod
    def blade(cls, A, m, value=1.0):
        c = np.zeros(1 << m)
        c[A] = value
        return cls(m, c)

    @classmethod
    def generator(cls, i, m):
        """e_i for 1 <= i <= m; e_0 is the unit."""
        return cls.blade(0 if i == 0 else 1 << (i - 1), m)

    @classmethod
    def paravector(cls, x):
        x = np.asarray(x, dtype=np.float64)
        return cls(x.size - 1, paravector_coeffs(x))

    @property
    def real(self) -> float:
        return float(self.coeffs[0])

    def is_paravector(self, tol=0.0) -> bool:
        return bool(np.all(np.abs(self.coeffs[grades(self.m) > 1]) <= tol))

    def vector(self) -> np.ndarray:
        return vector_part(self.coeffs, self.m)

    def _other(self, other):
        if isinstance(other, MultiVector):
            if other.m != self.m:
                raise ValueError(f"generator counts differ: {self.m} vs {other.m}")
            return other
        return MultiVector.scalar(float(other), self.m)

    def __add__(self, other):
        other = self._other(other)
        return MultiVector(self.m, self.coeffs + other.coeffs)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._other(other)
        return MultiVector(self.m, self.coeffs - other.coeffs)

    def __rsub__(self, other):
        return self._other(other) - self

    def __neg__(self):
        return MultiVector(self.m, -self.coeffs)

    def __mul__(self, other):
        if isinstance(other, MultiVector):
            return mv_mul(self, other)
        return MultiVector(self.m, self.coeffs * float(other))

    def __rmul__(self, other):
        return MultiVector(self.m, self.coeffs * float(other))

    def __truediv__(self, other):
        return MultiVector(self.m, self.coeffs / float(other))

    def __abs__(self):
        return mv_norm(self)

    def allclose(self, other, atol=1e-12):
        other = self._other(other)
        return bool(np.allclose(self.coeffs, other.coeffs, rtol=0.0, atol=atol))

    def __repr__(self):
        terms = []
        for A in np.flatnonzero(self.coeffs):
            name = "1" if A == 0 else "e" + "".join(str(i + 1) for i in range(self.m) if A >> i & 1)
            terms.append(f"{self.coeffs[A]:+.6g}*{name}")
        return f"MultiVector(m={self.m}: {' '.join(terms) or '0'})"


def mv_mul(a: MultiVector, b: MultiVector) -> MultiVector:
    if a.m != b.m:
        raise ValueError(f"generator counts differ: {a.m} vs {b.m}")
    return MultiVector(a.m, mul_coeffs(a.coeffs, b.coeffs, a.m))


def mv_conj(a: MultiVector) -> MultiVector:
    return MultiVector(a.m, conj_coeffs(a.coeffs, a.m))


def mv_norm(a: MultiVector) -> float:
    return float(norm_coeffs(a.coeffs))


def mv_inverse(a: MultiVector, cond_max: float = 1e12) -> MultiVector:
    """Two-sided inverse by solving the left-regular linear system."""
    L = left_regular_matrix(a.coeffs, a.m)
    cond = np.linalg.cond(L)
    if not np.isfinite(cond) or cond > cond_max:
        raise SingularElementError(f"left-regular matrix condition {cond:.3g} exceeds {cond_max:.3g}")
    rhs = np.zeros(1 << a.m)
    rhs[0] = 1.0
    return MultiVector(a.m, np.linalg.solve(L, rhs))
