"""Poisson-kernel machinery on the unit ball B_n.

Positive harmonic functions are finite atomic Herglotz measures
(:class:`AtomicHarmonic`); bounded ones are Poisson integrals of boundary data
against a :class:`SphereQuadrature`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from . import _kernels, fd
from .mobius import _sq, bracket_sq, mobius_jacobian, mobius_map
from .report import FD, CheckReport

SPHERE_TOL = 1e-12


def _require_sphere(xi):
    r = np.sqrt(_sq(np.asarray(xi, dtype=np.float64)))
    if np.any(np.abs(r - 1.0) > SPHERE_TOL):
        raise ValueError("boundary point is not on the unit sphere")


def random_sphere(rng, size, n):
    v = rng.standard_normal((*np.atleast_1d(size), n))
    return v / np.sqrt(_sq(v))[..., None]


def random_ball(rng, size, n, radius=0.9):
    """Uniform samples from the ball of the given radius."""
    d = random_sphere(rng, size, n)
    r = radius * rng.random(np.atleast_1d(size)) ** (1.0 / n)
    return d * r[..., None]


# ---------------------------------------------------------------------------
# the kernel
# ---------------------------------------------------------------------------


def poisson_kernel(x, xi):
    """P(x, xi) = (1 - |x|^2) / |x - xi|^n."""
    x = np.asarray(x, dtype=np.float64)
    _require_sphere(xi)
    n = x.shape[-1]
    return (1.0 - _sq(x)) / _sq(x - xi) ** (n / 2.0)


def poisson_grad(x, xi):
    x = np.asarray(x, dtype=np.float64)
    xi = np.asarray(xi, dtype=np.float64)
    _require_sphere(xi)
    n = x.shape[-1]
    d = x - xi
    r2 = _sq(d)
    rn = r2 ** (n / 2.0)
    return -2.0 * x / rn[..., None] - (n * (1.0 - _sq(x)) / (rn * r2))[..., None] * d


# ---------------------------------------------------------------------------
# positive harmonic functions
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class AtomicHarmonic:
    """f = sum_k w_k P(., xi_k) for a finite positive measure on the sphere."""

    weights: np.ndarray
    sites: np.ndarray

    def __post_init__(self):
        w = np.array(self.weights, dtype=np.float64).reshape(-1)
        s = np.array(self.sites, dtype=np.float64).reshape(w.size, -1)
        if np.any(w <= 0):
            raise ValueError("atom weights must be positive")
        if s.shape[1] < 2:
            raise ValueError("dimension must be at least 2")
        _require_sphere(s)
        w.flags.writeable = False
        s.flags.writeable = False
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "sites", s)

    @property
    def n(self):
        return self.sites.shape[1]

    @property
    def mass(self):
        return float(self.weights.sum())

    @classmethod
    def random(cls, n, rng, max_atoms=5):
        k = int(rng.integers(1, max_atoms + 1))
        w = np.exp(rng.uniform(np.log(0.1), np.log(10.0), k))
        return cls(w, random_sphere(rng, k, n))

    def _eval(self, x):
        x = np.asarray(x, dtype=np.float64)
        flat = x.reshape(-1, self.n)
        B = flat.shape[0]
        w = np.broadcast_to(self.weights, (B, self.weights.size))
        s = np.broadcast_to(self.sites, (B,) + self.sites.shape)
        val, grad = _kernels.atomic_eval_grad(w, s, flat)
        return val.reshape(x.shape[:-1]), grad.reshape(x.shape)

    def value(self, x):
        return self._eval(x)[0]

    def grad(self, x):
        return self._eval(x)[1]

    __call__ = value


def atomic_eval(f: AtomicHarmonic, x):
    return f.value(x)


def atomic_grad(f: AtomicHarmonic, x):
    return f.grad(x)


def random_atomic_batch(n, rng, size, max_atoms=5):
    """Padded arrays ``(weights (B, K), sites (B, K, n))`` of random atomic functions."""
    counts = rng.integers(1, max_atoms + 1, size)
    w = np.exp(rng.uniform(np.log(0.1), np.log(10.0), (size, max_atoms)))
    w[np.arange(max_atoms)[None, :] >= counts[:, None]] = 0.0
    return w, random_sphere(rng, (size, max_atoms), n)


def atomic_batch_eval_grad(weights, sites, x):
    return _kernels.atomic_eval_grad(weights, sites, x)


# ---------------------------------------------------------------------------
# extremal family
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExtremalFunction:
    """x -> f(a) |1 - phi_a(x) conj(a)|^{n-2} P_xi(phi_a(x))."""

    a: np.ndarray
    xi: np.ndarray
    scale: float

    def __post_init__(self):
        if self.scale <= 0:
            raise ValueError("scale f(a) must be positive")
        object.__setattr__(self, "a", np.asarray(self.a, dtype=np.float64))
        object.__setattr__(self, "xi", np.asarray(self.xi, dtype=np.float64))
        _require_sphere(self.xi)

    @property
    def n(self):
        return self.a.size

    def _outer(self, y):
        k = (self.n - 2) / 2.0
        b2 = bracket_sq(y, self.a)
        d = y - self.xi
        r2 = _sq(d)
        P = (1.0 - _sq(y)) / r2 ** (self.n / 2.0)
        return self.scale * b2**k * P, b2, P, k

    def value(self, x):
        return self._outer(mobius_map(self.a, x))[0]

    def grad(self, x):
        x = np.asarray(x, dtype=np.float64)
        y = mobius_map(self.a, x)
        _, b2, P, k = self._outer(y)
        db2 = 2.0 * _sq(self.a)[..., None] * y - 2.0 * self.a
        gy = self.scale * (k * (b2 ** (k - 1.0) * P)[..., None] * db2 + (b2**k)[..., None] * _grad_kernel(y, self.xi))
        J = mobius_jacobian(self.a, x)
        return np.einsum("...ji,...j->...i", J, gy)

    __call__ = value


def _grad_kernel(x, xi):
    n = x.shape[-1]
    d = x - xi
    r2 = _sq(d)
    rn = r2 ** (n / 2.0)
    return -2.0 * x / rn[..., None] - (n * (1.0 - _sq(x)) / (rn * r2))[..., None] * d


def extremal_function(a, xi, scale) -> ExtremalFunction:
    return ExtremalFunction(a, xi, float(scale))


# ---------------------------------------------------------------------------
# quadrature on the sphere
# ---------------------------------------------------------------------------

DEFAULT_SIZE = {2: 256, 3: 96}
DEFAULT_MC_SIZE = 200_000


@dataclass(frozen=True, eq=False)
class SphereQuadrature:
    """Nodes and weights (summing to 1) for the normalised surface measure.

    The deterministic rules split the sphere at the hyperplane x_1 = 0 so that
    data with a jump across it (the hemisphere extremal) is integrated to
    rounding accuracy.
    """

    n: int
    nodes: np.ndarray
    weights: np.ndarray
    scheme: str
    seed: int | None = None

    @property
    def size(self):
        return self.weights.size

    @property
    def monte_carlo(self):
        return self.scheme == "monte-carlo"

    @classmethod
    def build(cls, n, size=None, seed=0):
        if n < 2:
            raise ValueError("sphere quadrature needs n >= 2")
        if n == 2:
            return cls.arc(size or DEFAULT_SIZE[2])
        if n == 3:
            return cls.product(size or DEFAULT_SIZE[3])
        return cls.monte_carlo_rule(n, size or DEFAULT_MC_SIZE, seed)

    @classmethod
    def arc(cls, per_panel):
        t, w = np.polynomial.legendre.leggauss(per_panel)
        theta = np.concatenate([t * np.pi / 2.0, np.pi + t * np.pi / 2.0])
        weights = np.concatenate([w, w]) / 4.0
        nodes = np.stack([np.cos(theta), np.sin(theta)], axis=-1)
        return cls(2, nodes, weights, "gauss-legendre-arc")

    @classmethod
    def product(cls, per_panel, longitudes=None):
        """Gauss-Legendre in x_1 (two panels) times uniform longitude; exact area by Archimedes."""
        longitudes = longitudes or 2 * per_panel
        t, w = np.polynomial.legendre.leggauss(per_panel)
        tt = np.concatenate([(t - 1.0) / 2.0, (t + 1.0) / 2.0])
        wt = np.concatenate([w, w]) / 4.0
        phi = 2.0 * np.pi * (np.arange(longitudes) + 0.5) / longitudes
        T, PH = np.meshgrid(tt, phi, indexing="ij")
        rho = np.sqrt(1.0 - T**2)
        nodes = np.stack([T, rho * np.cos(PH), rho * np.sin(PH)], axis=-1).reshape(-1, 3)
        weights = np.repeat(wt, longitudes) / longitudes
        return cls(3, nodes, weights, "gauss-legendre-product")

    @classmethod
    def monte_carlo_rule(cls, n, size, seed=0):
        rng = np.random.default_rng(seed)
        nodes = random_sphere(rng, size, n)
        return cls(n, nodes, np.full(size, 1.0 / size), "monte-carlo", seed)


# ---------------------------------------------------------------------------
# boundary data and Poisson integrals
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class BoundaryData:
    n: int
    m: int
    func: Callable
    bounded: bool = True
    label: str = "data"

    def values(self, xi):
        v = np.asarray(self.func(np.asarray(xi, dtype=np.float64)), dtype=np.float64)
        v = v.reshape(v.shape[: np.ndim(xi) - 1] + (self.m,))
        if self.bounded and np.any(np.sqrt(_sq(v)) > 1.0 + 1e-12):
            raise ValueError(f"boundary data '{self.label}' exceeds the unit bound")
        return v

    @classmethod
    def constant(cls, n, c):
        c = np.atleast_1d(np.asarray(c, dtype=np.float64))
        return cls(n, c.size, lambda xi: np.broadcast_to(c, xi.shape[:-1] + c.shape), bool(np.linalg.norm(c) <= 1), "constant")

    @classmethod
    def hemisphere(cls, n, direction=None, m=1, component=0):
        """+1 on {xi . u > 0}, -1 elsewhere, placed in one component of R^m."""
        u = np.zeros(n) if direction is None else np.asarray(direction, dtype=np.float64)
        if direction is None:
            u[0] = 1.0

        def func(xi):
            out = np.zeros(xi.shape[:-1] + (m,))
            out[..., component] = np.where(xi @ u > 0, 1.0, -1.0)
            return out

        return cls(n, m, func, True, "hemisphere")

    @classmethod
    def random_smooth(cls, n, m, rng, strength=None):
        """v / sqrt(1 + |v|^2) for a random quadratic vector polynomial v; |g| < 1."""
        strength = rng.uniform(0.5, 4.0) if strength is None else strength
        c = rng.standard_normal(m) * 0.5
        L = rng.standard_normal((m, n))
        Q = rng.standard_normal((m, n, n)) * 0.5

        def func(xi):
            v = c + xi @ L.T + np.einsum("...i,jik,...k->...j", xi, Q, xi)
            v = strength * v
            return v / np.sqrt(1.0 + _sq(v))[..., None]

        return cls(n, m, func, True, "random-smooth")

    @classmethod
    def offset_step(cls, n, offset, steepness, direction=None):
        """t + (1 - |t|) tanh(s xi . u): smooth near-extremal data with a level offset."""
        u = np.zeros(n) if direction is None else np.asarray(direction, dtype=np.float64)
        if direction is None:
            u[0] = 1.0
        return cls(n, 1, lambda xi: (offset + (1 - abs(offset)) * np.tanh(steepness * (xi @ u)))[..., None], True, "offset-step")


class QuadEstimate(NamedTuple):
    value: np.ndarray  # (..., m)
    jac: np.ndarray  # (..., m, n)
    value_se: np.ndarray  # standard error, zero for deterministic rules
    jac_se: np.ndarray


@dataclass(eq=False)
class PoissonIntegral:
    """Harmonic extension of boundary data, evaluated by quadrature.

    With ``centered=True`` the integrand uses g - g(x/|x|), which leaves the
    exact integral unchanged (the kernel integrates to one and its gradient
    to zero) but cuts Monte Carlo variance near the sphere.
    """

    data: BoundaryData
    quad: SphereQuadrature
    centered: bool = False
    _vals: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.data.n != self.quad.n:
            raise ValueError(f"boundary data lives on S^{self.data.n - 1}, quadrature on S^{self.quad.n - 1}")
        self._vals = self.data.values(self.quad.nodes)

    @property
    def n(self):
        return self.data.n

    @property
    def m(self):
        return self.data.m

    def estimate(self, x) -> QuadEstimate:
        x = np.asarray(x, dtype=np.float64)
        flat = x.reshape(-1, self.n)
        B = flat.shape[0]
        if self.centered:
            r = np.sqrt(_sq(flat))
            dirs = np.zeros_like(flat)
            dirs[:, 0] = 1.0
            inner = r > 0
            dirs[inner] = flat[inner] / r[inner, None]
            center = self.data.values(dirs)
            center[~inner] = 0.0
        else:
            center = np.zeros((B, self.m))
        val, jac, val2, jac2 = _kernels.poisson_moments(flat, self.quad.nodes, self.quad.weights, self._vals, center)
        if self.quad.monte_carlo:
            N = self.quad.size
            vse = np.sqrt(np.maximum(val2 - val**2, 0.0) / N)
            jse = np.sqrt(np.maximum(jac2 - jac**2, 0.0) / N)
        else:
            vse = np.zeros_like(val)
            jse = np.zeros_like(jac)
        val = val + center
        shp = x.shape[:-1]
        return QuadEstimate(
            val.reshape(shp + (self.m,)),
            jac.reshape(shp + (self.m, self.n)),
            vse.reshape(shp + (self.m,)),
            jse.reshape(shp + (self.m, self.n)),
        )

    def value(self, x):
        v = self.estimate(x).value
        return v[..., 0] if self.m == 1 else v

    def jacobian(self, x):
        return self.estimate(x).jac

    def grad(self, x):
        j = self.estimate(x).jac
        if self.m != 1:
            raise ValueError("grad is defined for scalar data; use jacobian")
        return j[..., 0, :]

    __call__ = value


def poisson_integral(g: BoundaryData, q: SphereQuadrature, x):
    """Value in R^m of the Poisson integral of g at x."""
    return PoissonIntegral(g, q).estimate(x).value


def hemisphere_gradient_at_zero(n, q: SphereQuadrature | None = None, with_error=False):
    """|grad U(0)| for U the Poisson integral of the +-1 hemisphere data."""
    q = q or SphereQuadrature.build(n)
    est = PoissonIntegral(BoundaryData.hemisphere(n), q).estimate(np.zeros(n))
    g = est.jac[0]
    val = float(np.sqrt(g @ g))
    if not with_error:
        return val
    # error of the norm is at most the Euclidean size of the componentwise errors
    return val, float(np.sqrt(est.jac_se[0] @ est.jac_se[0]))


# ---------------------------------------------------------------------------
# Moebius-weighted transforms
# ---------------------------------------------------------------------------


def hua_transform(f, a):
    """x -> ((1 - |a|^2) / |1 - x conj(a)|^2)^{n/2 - 1} f(phi_a(x)); harmonic when f is."""
    a = np.asarray(a, dtype=np.float64)
    k = a.size / 2.0 - 1.0

    def g(x):
        w = ((1.0 - _sq(a)) / bracket_sq(x, a)) ** k
        fx = np.asarray(f(mobius_map(a, x)))
        return w.reshape(w.shape + (1,) * (fx.ndim - w.ndim)) * fx

    return g


def laplace_invariance_check(X, a, x, rtol=1e-3, h=fd.LAPLACE_STEP) -> CheckReport:
    """(1 - |x|^2)^{n/2+1} lap X(x) against (1 - |y|^2)^{n/2+1} lap Y(y), y = phi_a(x)."""
    a = np.asarray(a, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    n = a.size
    k = n / 2.0 - 1.0

    def Y(y):
        xx = mobius_map(a, y)
        return (bracket_sq(xx, a) / (1.0 - _sq(a))) ** k * X(xx)

    y = mobius_map(a, x)
    lx, sx = fd.laplacian_richardson(X, x, h)
    ly, sy = fd.laplacian_richardson(Y, y, h)
    wx = (1.0 - _sq(x)) ** (n / 2.0 + 1.0)
    wy = (1.0 - _sq(y)) ** (n / 2.0 + 1.0)
    left, right = wx * lx, wy * ly
    # when both Laplacians vanish the residual is stencil noise, measured against the cancelling terms
    scale = max(abs(left), abs(right), 1e-3 * (wx * sx + wy * sy), np.finfo(float).tiny)
    return CheckReport(
        "laplace-invariance", n, abs(left - right) / scale, 0.0, rtol, regime=FD, point=[a, x],
        params={"left": float(left), "right": float(right)},
    )


def harmonicity_residual(f, x, h=fd.LAPLACE_STEP):
    """|lap f(x)| relative to the sum of the unmixed second partials."""
    lap, scale = fd.laplacian_richardson(f, x, h)
    return np.abs(lap) / np.maximum(scale, np.finfo(float).tiny)
