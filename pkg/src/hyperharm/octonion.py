"""Octonions via Cayley-Dickson doubling of the quaternions.

The multiplication table is built once from the doubling rule
``(p, q)(r, s) = (p r - conj(s) q, s p + q conj(r))`` applied to basis
vectors, then every product goes through the shared table kernel.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _kernels

DIM = 8


def _cd_conj(x):
    out = -x
    out[0] = x[0]
    return out


def _cd_mul(x, y):
    d = x.size
    if d == 1:
        return x * y
    h = d // 2
    p, q = x[:h], x[h:]
    r, s = y[:h], y[h:]
    return np.concatenate([_cd_mul(p, r) - _cd_mul(_cd_conj(s), q), _cd_mul(s, p) + _cd_mul(q, _cd_conj(r))])


@lru_cache(maxsize=None)
def product_table() -> tuple[np.ndarray, np.ndarray]:
    sign = np.zeros((DIM, DIM), dtype=np.int8)
    index = np.zeros((DIM, DIM), dtype=np.int64)
    eye = np.eye(DIM)
    for i in range(DIM):
        for j in range(DIM):
            prod = _cd_mul(eye[i], eye[j])
            k = int(np.flatnonzero(prod)[0])
            index[i, j] = k
            sign[i, j] = int(prod[k])
    sign.flags.writeable = False
    index.flags.writeable = False
    return sign, index


def mul_coeffs(a, b) -> np.ndarray:
    sign, index = product_table()
    return _kernels.table_product(a, b, sign, index)


_CONJ = np.array([1.0] + [-1.0] * 7)


def conj_coeffs(a) -> np.ndarray:
    return np.asarray(a) * _CONJ


def norm_coeffs(a) -> np.ndarray:
    a = np.asarray(a)
    return np.sqrt(np.einsum("...i,...i->...", a, a))


@dataclass(frozen=True, eq=False)
class Octonion:
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=np.float64)
        if c.shape != (DIM,):
            raise ValueError(f"an octonion has 8 coefficients, got shape {c.shape}")
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def unit(cls, i, value=1.0):
        c = np.zeros(DIM)
        c[i] = value
        return cls(c)

    @property
    def real(self):
        return float(self.coeffs[0])

    def __add__(self, other):
        return Octonion(self.coeffs + _coeffs(other))

    __radd__ = __add__

    def __sub__(self, other):
        return Octonion(self.coeffs - _coeffs(other))

    def __rsub__(self, other):
        return Octonion(_coeffs(other) - self.coeffs)

    def __neg__(self):
        return Octonion(-self.coeffs)

    def __mul__(self, other):
        if isinstance(other, Octonion):
            return oct_mul(self, other)
        return Octonion(self.coeffs * float(other))

    def __rmul__(self, other):
        return Octonion(self.coeffs * float(other))

    def __abs__(self):
        return oct_norm(self)

    def allclose(self, other, atol=1e-12):
        return bool(np.allclose(self.coeffs, _coeffs(other), rtol=0.0, atol=atol))

    def __repr__(self):
        return "Octonion(" + ", ".join(f"{c:.6g}" for c in self.coeffs) + ")"


def _coeffs(x):
    if isinstance(x, Octonion):
        return x.coeffs
    c = np.zeros(DIM)
    c[0] = float(x)
    return c


def oct_mul(a: Octonion, b: Octonion) -> Octonion:
    return Octonion(mul_coeffs(a.coeffs, b.coeffs))


def oct_conj(a: Octonion) -> Octonion:
    return Octonion(conj_coeffs(a.coeffs))


def oct_norm(a: Octonion) -> float:
    return float(norm_coeffs(a.coeffs))
