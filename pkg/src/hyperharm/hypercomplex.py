"""Dirac operators on Clifford- and octonion-valued fields, and the Schwarz-type
bounds for bounded harmonic fields vanishing at a point.

A Clifford field lives on B_{n+1} and takes values in R_{0,n} (2**n
coefficients); an octonion field lives on B_8 and takes values in O.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import clifford, fd, octonion
from .harmonic import random_ball, random_sphere
from .inequalities import operator_norm
from .mobius import _sq, bracket_sq, mobius_map
from .report import FD, CheckReport, PreconditionError

DIRAC_STEP = 1e-5
FACTOR_STEP = 1e-3
MAX_DIRAC_RADIUS = 0.95


@dataclass(frozen=True, eq=False)
class CliffordField:
    """x in R^{n+1} -> R_{0,n}; ``func`` maps (..., n+1) to (..., 2**n)."""

    dim: int
    func: Callable
    bounded: bool = False
    harmonic: bool = False

    @property
    def m(self):
        return self.dim - 1

    @property
    def width(self):
        return 1 << self.m

    def __call__(self, x):
        return self.func(np.asarray(x, dtype=np.float64))

    def norm(self, x):
        return clifford.norm_coeffs(self(x))

    def basis_left(self, i, u):
        """e_i u with e_0 = 1."""
        if i == 0:
            return u
        sign, index = clifford.product_table(self.m)
        A = 1 << (i - 1)
        out = np.zeros_like(u)
        out[..., index[A]] = sign[A] * u
        return out

    def conj_basis_sign(self, i):
        return 1.0 if i == 0 else -1.0


@dataclass(frozen=True, eq=False)
class OctonionField:
    """x in R^8 -> O; ``func`` maps (..., 8) to (..., 8)."""

    func: Callable
    bounded: bool = False
    harmonic: bool = False

    dim = 8
    width = 8

    def __call__(self, x):
        return self.func(np.asarray(x, dtype=np.float64))

    def norm(self, x):
        return octonion.norm_coeffs(self(x))

    def basis_left(self, i, u):
        if i == 0:
            return u
        sign, index = octonion.product_table()
        out = np.zeros_like(u)
        out[..., index[i]] = sign[i] * u
        return out

    def conj_basis_sign(self, i):
        return 1.0 if i == 0 else -1.0


def _dirac(F, x, variant, h):
    x = np.asarray(x, dtype=np.float64)
    if np.any(np.sqrt(_sq(x)) + h >= 1.0):
        raise ValueError("finite-difference stencil leaves the unit ball")
    if variant not in ("D", "Dbar"):
        raise ValueError(f"unknown Dirac variant {variant!r}")
    J = fd.jacobian(F, x, h)  # (..., width, dim)
    out = np.zeros(J.shape[:-1])
    for i in range(F.dim):
        s = F.conj_basis_sign(i) if variant == "Dbar" else 1.0
        out += s * F.basis_left(i, J[..., i])
    return out


def _require_radius(x):
    x = np.asarray(x, dtype=np.float64)
    if np.any(np.sqrt(_sq(x)) > MAX_DIRAC_RADIUS):
        raise ValueError(f"finite-difference Dirac operator restricted to |x| <= {MAX_DIRAC_RADIUS}")
    return x


def dirac_fd(F: CliffordField, x, variant="D", h=DIRAC_STEP) -> np.ndarray:
    """sum_i e_i dF/dx_i (or conj(e_i) for ``Dbar``), left multiplication, central differences."""
    return _dirac(F, _require_radius(x), variant, h)


def oct_dirac_fd(F: OctonionField, x, variant="D", h=DIRAC_STEP) -> np.ndarray:
    return _dirac(F, _require_radius(x), variant, h)


def _factorization(F, x, h, name, tol):
    x = _require_radius(x)
    G = type(F)(func=lambda y: _dirac(F, y, "D", h), **({"dim": F.dim} if isinstance(F, CliffordField) else {}))
    lhs = _dirac(G, x, "Dbar", h)
    lap = fd.second_partials(F, x, h).sum(axis=-1)
    resid = float(np.sqrt(np.sum((lhs - lap) ** 2)))
    return CheckReport(name, F.dim, resid, 0.0, tol, regime=FD, point=x, params={"laplacian_norm": float(np.sqrt(np.sum(lap**2)))})


def laplacian_factorization_check(F: CliffordField, x, h=FACTOR_STEP, tol=1e-6) -> CheckReport:
    """|| Dbar(D F) - lap F || at x; central stencils are exact on quadratics."""
    return _factorization(F, x, h, "dirac-factorization", tol)


def oct_factorization_check(F: OctonionField, x, h=FACTOR_STEP, tol=1e-6) -> CheckReport:
    return _factorization(F, x, h, "octonion-factorization", tol)


# ---------------------------------------------------------------------------
# test families
# ---------------------------------------------------------------------------


def fueter_variable(dim, i, octonionic=False):
    """x_i - x_0 e_i, left monogenic."""
    width = 8 if octonionic else 1 << (dim - 1)
    slot = i if octonionic else 1 << (i - 1)

    def func(x):
        out = np.zeros(x.shape[:-1] + (width,))
        out[..., 0] = x[..., i]
        out[..., slot] = -x[..., 0]
        return out

    return OctonionField(func, harmonic=True) if octonionic else CliffordField(dim, func, harmonic=True)


def fueter_symmetric_product(dim, i, j):
    """z_i z_j + z_j z_i for Fueter variables z_k; left monogenic and harmonic."""
    m = dim - 1
    zi, zj = fueter_variable(dim, i), fueter_variable(dim, j)

    def func(x):
        a, b = zi(x), zj(x)
        return clifford.mul_coeffs(a, b, m) + clifford.mul_coeffs(b, a, m)

    return CliffordField(dim, func, harmonic=True)


def paravector_conjugate_field(dim):
    """x -> conj(x) as a paravector; D of it is 1 + n."""
    m = dim - 1

    def func(x):
        return clifford.conj_coeffs(clifford.paravector_coeffs(x), m)

    return CliffordField(dim, func)


def random_quadratic(dim, width, rng):
    """Componentwise c + L x + x^T Q x with Gaussian coefficients; not harmonic in general."""
    c = rng.standard_normal(width)
    L = rng.standard_normal((width, dim))
    Q = rng.standard_normal((width, dim, dim))

    def func(x):
        return c + x @ L.T + np.einsum("...i,jik,...k->...j", x, Q, x)

    return func


def random_quadratic_clifford(dim, rng):
    return CliffordField(dim, random_quadratic(dim, 1 << (dim - 1), rng))


def random_quadratic_octonion(rng):
    return OctonionField(random_quadratic(8, 8, rng))


def random_harmonic(dim, width, rng, poles=3):
    """Harmonic components: affine + trace-free quadratic + Newtonian potentials of exterior poles."""
    if dim < 3:
        raise ValueError("exterior potentials need dimension >= 3")
    c = rng.standard_normal(width)
    L = rng.standard_normal((width, dim))
    S = rng.standard_normal((width, dim, dim))
    S = (S + S.transpose(0, 2, 1)) / 2.0
    S -= np.einsum("jii->j", S)[:, None, None] * np.eye(dim) / dim
    zeta = random_sphere(rng, poles, dim) * rng.uniform(1.2, 2.0, poles)[:, None]
    C = rng.standard_normal((width, poles))

    def func(x):
        d = x[..., None, :] - zeta
        pot = _sq(d) ** ((2.0 - dim) / 2.0)
        return c + x @ L.T + np.einsum("...i,jik,...k->...j", x, S, x) + pot @ C.T

    return func


def estimate_sup(func, dim, rng, samples=20000, refine=20, rounds=30):
    """Largest |func| on the unit sphere (where a subharmonic |F| peaks) by sampling and local search."""
    pts = random_sphere(rng, samples, dim)
    vals = np.sqrt(_sq(func(pts)))
    order = np.argsort(vals)[-refine:]
    best_pts, best_vals = pts[order], vals[order]
    step = 0.1
    for _ in range(rounds):
        trial = best_pts + step * rng.standard_normal(best_pts.shape)
        trial /= np.sqrt(_sq(trial))[:, None]
        tv = np.sqrt(_sq(func(trial)))
        better = tv > best_vals
        best_pts[better], best_vals[better] = trial[better], tv[better]
        step *= 0.8
    return float(best_vals.max())


def normalize_admissible(func, dim, a, rng, safety=1.05):
    """(F - F(a)) / (2 S) with S = safety * estimated sup; vanishes at a with |.| <= 1."""
    a = np.asarray(a, dtype=np.float64)
    S = safety * estimate_sup(func, dim, rng)
    fa = func(a)

    def out(x):
        return (func(x) - fa) / (2.0 * S)

    return out


def admissible_clifford_field(dim, a, rng) -> CliffordField:
    raw = random_harmonic(dim, 1 << (dim - 1), rng)
    return CliffordField(dim, normalize_admissible(raw, dim, a, rng), bounded=True, harmonic=True)


def admissible_octonion_field(a, rng) -> OctonionField:
    raw = random_harmonic(8, 8, rng)
    return OctonionField(normalize_admissible(raw, 8, a, rng), bounded=True, harmonic=True)


# ---------------------------------------------------------------------------
# transforms and bounds
# ---------------------------------------------------------------------------


def schwarz_transform(F, a):
    """Return ``(g, g1)`` for the field F and centre a in B_{n+1}.

    g1(x) = ((1 - |a|^2) / |1 - x conj(a)|^2)^{(n+1)/2 - 1} F(phi_a(x)) is harmonic;
    g(x)  = ((1 - |a|) / |1 - x conj(a)|)^{n - 1} F(phi_a(x)) is g1 rescaled by
    ((1 - |a|)/(1 + |a|))^{(n-1)/2} and stays below 1 in norm.
    """
    a = np.asarray(a, dtype=np.float64)
    N = F.dim
    n = N - 1
    ra = float(np.sqrt(a @ a))

    def g1(x):
        w = ((1.0 - ra**2) / bracket_sq(x, a)) ** ((n + 1) / 2.0 - 1.0)
        return w[..., None] * F(mobius_map(a, x))

    def g(x):
        w = ((1.0 - ra) / np.sqrt(bracket_sq(x, a))) ** (n - 1)
        return w[..., None] * F(mobius_map(a, x))

    kw = {"dim": N} if isinstance(F, CliffordField) else {}
    return type(F)(func=g, bounded=True, **kw), type(F)(func=g1, harmonic=True, **kw)


def _one_minus_conj_a_x(a, x, octonionic):
    if octonionic:
        p = octonion.mul_coeffs(octonion.conj_coeffs(a), x)
        p = -p
        p[..., 0] += 1.0
        return float(octonion.norm_coeffs(p))
    m = a.size - 1
    pa = clifford.conj_coeffs(clifford.paravector_coeffs(a), m)
    p = -clifford.mul_coeffs(pa, clifford.paravector_coeffs(x), m)
    p[..., 0] += 1.0
    return float(clifford.norm_coeffs(p))


def zhang_constant(n):
    """1 / (2^{1/(n+1)} - 1)."""
    return 1.0 / (2.0 ** (1.0 / (n + 1)) - 1.0)


def _schwarz_reports(F, a, x, name, octonionic, f_tol, rtol, with_gradient):
    a = np.asarray(a, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    N = a.size
    n = N - 1
    fa = float(F.norm(a))
    if fa > f_tol:
        raise PreconditionError(f"field does not vanish at a: |F(a)| = {fa:.3g}")
    ra = float(np.sqrt(a @ a))
    C = zhang_constant(n)
    dist = float(np.sqrt(_sq(x - a)))
    B = _one_minus_conj_a_x(a, x, octonionic)
    improved = C * (1.0 + ra) ** (n - 1) * dist / B**n
    original = C * (1.0 + ra) ** n * dist / B ** (n + 1)
    lhs = float(F.norm(x))
    out = [
        CheckReport(name, N, lhs, improved, rtol * max(1.0, improved), point=[a, x], m=F.width, params={"bracket": B}),
        CheckReport(f"{name}-original", N, lhs, original, rtol * max(1.0, original), point=[a, x], m=F.width),
        CheckReport(f"{name}-below-original", N, improved, original, rtol * max(1.0, original), point=[a, x], m=F.width),
    ]
    if with_gradient:
        J = fd.jacobian(F, a, DIRAC_STEP)
        bound = C / ((1.0 + ra) * (1.0 - ra) ** n)
        out.append(CheckReport(f"{name}-gradient", N, operator_norm(J), bound, 1e-6 * max(1.0, bound), regime=FD, point=a, m=F.width))
    return out


def check_zhang_improved(F: CliffordField, a, x, f_tol=1e-10, rtol=1e-12, with_gradient=False) -> list[CheckReport]:
    """Schwarz bound with exponents (n - 1, n) for harmonic F: B_{n+1} -> R_{0,n}, |F| <= 1, F(a) = 0.

    Returns ``[improved, original, improved-below-original]`` and, when
    requested, the gradient corollary at a.
    """
    return _schwarz_reports(F, a, x, "zhang-improved", False, f_tol, rtol, with_gradient)


def check_wang(F: OctonionField, a, x, f_tol=1e-10, rtol=1e-12, with_gradient=False) -> list[CheckReport]:
    """Octonionic counterpart on B_8 with exponents 6 and 7."""
    return _schwarz_reports(F, a, x, "wang", True, f_tol, rtol, with_gradient)


def zhang_zero_check(F, x, rtol=1e-12) -> CheckReport:
    """|F(x)| <= |x| / (2^{1/(n+1)} - 1) for F(0) = 0."""
    x = np.asarray(x, dtype=np.float64)
    n = x.size - 1
    rhs = zhang_constant(n) * float(np.sqrt(x @ x))
    return CheckReport("zhang-zero", x.size, float(F.norm(x)), rhs, rtol * max(1.0, rhs), point=x)


def sample_points(dim, rng, count, radius=0.99):
    return random_ball(rng, count, dim, radius)

