"""Both sides of the gradient and Lipschitz inequalities for harmonic functions
on B_n, together with the dimensional constants they involve."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .harmonic import (
    BoundaryData,
    PoissonIntegral,
    SphereQuadrature,
    random_sphere,
)
from .mobius import _sq, geodesic, geodesic_speed, hyperbolic_metric
from .report import INFORMATIONAL, QUADRATURE, CheckReport

STRUCTURAL_TOL = 1e-10
DETERMINISTIC_QUAD_TOL = 1e-8
MC_SIGMAS = 3.0
N3_CONSTANT = 8.0 / (3.0 * math.sqrt(3.0))


class DimensionError(ValueError):
    """The inequality is not claimed in this dimension."""


def ball_volume(n: int) -> float:
    if n < 1:
        raise ValueError("dimension must be positive")
    return math.pi ** (n / 2.0) / math.gamma(n / 2.0 + 1.0)


def liu_constant_exact(n: int) -> tuple[Fraction, int]:
    """2|B_{n-1}|/|B_n| as ``(q, p)`` meaning ``q / pi**p`` with q rational."""
    if n < 2:
        raise ValueError("the constant needs n >= 2")
    if n % 2:
        k = (n - 1) // 2
        return Fraction(n * math.comb(2 * k, k), 4**k), 0
    k = n // 2
    return Fraction(n * 4**k * math.factorial(k) * math.factorial(k - 1), math.factorial(2 * k)), 1


def liu_constant(n: int) -> float:
    q, p = liu_constant_exact(n)
    return float(q) / math.pi**p


def gradient_constant(n: int) -> float:
    """Sharp coefficient of 1/(1-|x|^2) in the gradient bound for |f| < 1."""
    return N3_CONSTANT if n == 3 else liu_constant(n)


def operator_norm(J) -> float:
    """Largest singular value of a real matrix."""
    J = np.atleast_2d(np.asarray(J, dtype=np.float64))
    if not np.all(np.isfinite(J)):
        raise ValueError("matrix has non-finite entries")
    return float(np.linalg.svd(J, compute_uv=False)[0])


def random_rotation(n: int, seed=None) -> np.ndarray:
    """Haar-random orthogonal matrix from a sign-corrected Householder QR; identity when seed is None."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if seed is None:
        return np.eye(n)
    rng = np.random.default_rng(seed)
    Q, R = np.linalg.qr(rng.standard_normal((n, n)))
    return Q * np.sign(np.diag(R))


# ---------------------------------------------------------------------------
# positive harmonic functions
# ---------------------------------------------------------------------------


def check_main_sharp(f, x, rtol=STRUCTURAL_TOL) -> CheckReport:
    """|(|x|^2 - 1) grad f(x) + (n - 2) x f(x)| <= n f(x) for positive harmonic f."""
    x = np.asarray(x, dtype=np.float64)
    n = x.size
    fx = float(f.value(x))
    v = (_sq(x) - 1.0) * f.grad(x) + (n - 2) * x * fx
    rhs = n * fx
    return CheckReport("main-sharp", n, np.sqrt(v @ v), rhs, rtol * rhs, point=x)


def _weighted_log(f, x, n):
    return math.log(float(f.value(x))) + (n / 2.0 - 1.0) * math.log(1.0 - float(_sq(x)))


def check_main_ball(f, x, y, rtol=STRUCTURAL_TOL) -> list[CheckReport]:
    """Hyperbolic Lipschitz bound with constant n - 1, plus the two intermediate steps of its proof.

    Returns ``[ball, weighted, chain]``:

    * ball: |log f(x)/f(y)| <= (n - 1) d(x, y)
    * weighted: |log of (1-|.|^2)^{n/2-1} f between x and y| <= (n/2) d(x, y)
    * chain: (n/2) d + (n/2 - 1)|log((1-|y|^2)/(1-|x|^2))| <= (n - 1) d
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    n = x.size
    d = float(hyperbolic_metric(x, y))
    fx, fy = float(f.value(x)), float(f.value(y))
    lhs = abs(math.log(fx / fy))
    scale = max(1.0, (n - 1) * d)
    ball = CheckReport("main-ball", n, lhs, (n - 1) * d, rtol * scale, point=[x, y])
    wlhs = abs(_weighted_log(f, x, n) - _weighted_log(f, y, n))
    weighted = CheckReport("main-ball-weighted", n, wlhs, n / 2.0 * d, rtol * scale, point=[x, y])
    mid = n / 2.0 * d + (n / 2.0 - 1.0) * abs(math.log((1.0 - _sq(y)) / (1.0 - _sq(x))))
    chain = CheckReport("main-ball-chain", n, mid, (n - 1) * d, rtol * scale, point=[x, y], params={"log_ratio": lhs})
    return [ball, weighted, chain]


def _gauss_panels(steps, order=4):
    t, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(0.0, 1.0, steps + 1)
    h = np.diff(edges)
    nodes = (edges[:-1, None] + h[:, None] * (t[None, :] + 1.0) / 2.0).ravel()
    weights = (h[:, None] * w[None, :] / 2.0).ravel()
    return nodes, weights


def check_geodesic_integral(f, x, y, steps=200, rtol=1e-6) -> list[CheckReport]:
    """Integrate |grad log((1-|.|^2)^{n/2-1} f)| |gamma'| along the geodesic from x to y.

    Returns ``[lower, upper]``: the integral dominates the endpoint difference
    and is dominated by (n/2) d(x, y).
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    n = x.size
    d = float(hyperbolic_metric(x, y)) if not np.array_equal(x, y) else 0.0
    if d == 0.0:
        integral = 0.0
    else:
        t, w = _gauss_panels(steps)
        pts = geodesic(x, y, t)
        fv = f.value(pts)
        g = f.grad(pts) / fv[:, None] - (n - 2.0) * pts / (1.0 - _sq(pts))[:, None]
        integral = float(w @ (np.sqrt(_sq(g)) * geodesic_speed(x, y, t)))
    endpoint = abs(_weighted_log(f, x, n) - _weighted_log(f, y, n))
    tol = rtol * max(1.0, n / 2.0 * d)
    lower = CheckReport("geodesic-lower", n, endpoint, integral, tol, regime=QUADRATURE, point=[x, y], params={"steps": steps})
    upper = CheckReport("geodesic-upper", n, integral, n / 2.0 * d, tol, regime=QUADRATURE, point=[x, y], params={"steps": steps})
    return [lower, upper]


# ---------------------------------------------------------------------------
# bounded harmonic functions
# ---------------------------------------------------------------------------


def _field(g, q):
    return g if isinstance(g, PoissonIntegral) else PoissonIntegral(g, q, centered=True)


def _quad_tol(se):
    """Tolerance for a quadrature-limited quantity with standard error ``se``."""
    return MC_SIGMAS * float(se) + DETERMINISTIC_QUAD_TOL


def _norm_se(vec_se):
    return float(np.sqrt(np.sum(np.square(vec_se))))


def check_liu_scalar(g: BoundaryData, q: SphereQuadrature, x) -> CheckReport:
    """|grad f(x)| <= C_n / (1 - |x|^2), with C_3 = 8/(3 sqrt 3)."""
    x = np.asarray(x, dtype=np.float64)
    F = _field(g, q)
    if F.m != 1:
        raise ValueError("scalar check needs m = 1 boundary data")
    n = x.size
    est = F.estimate(x)
    grad = est.jac[0]
    rhs = gradient_constant(n) / (1.0 - _sq(x))
    return CheckReport(
        "liu-scalar", n, np.sqrt(grad @ grad), rhs, _quad_tol(_norm_se(est.jac_se[0])),
        regime=QUADRATURE, point=x, m=1, params={"quad": q.scheme, "quad_size": q.size},
    )


def _reject_n3(n, name):
    if n == 3:
        raise DimensionError(f"{name} is stated for n = 2 or n >= 4, not n = 3")


def check_liu_vector(g: BoundaryData, q: SphereQuadrature, x, directions=0, rng=None) -> list[CheckReport]:
    """||grad f(x)|| <= C_n / (1 - |x|^2) for f into the unit ball of R^m.

    With ``directions > 0`` also checks the scalar projections <f, l> for
    random unit l, which each obey the scalar bound and never exceed the
    operator norm.
    """
    x = np.asarray(x, dtype=np.float64)
    n = x.size
    _reject_n3(n, "the vector gradient bound")
    F = _field(g, q)
    est = F.estimate(x)
    J = est.jac
    tol = _quad_tol(_norm_se(est.jac_se))
    rhs = liu_constant(n) / (1.0 - _sq(x))
    opn = operator_norm(J)
    out = [CheckReport("liu-vector", n, opn, rhs, tol, regime=QUADRATURE, point=x, m=F.m, params={"quad": q.scheme})]
    if directions:
        rng = rng or np.random.default_rng(0)
        for l in random_sphere(rng, directions, F.m):
            proj = J.T @ l
            pn = float(np.sqrt(proj @ proj))
            out.append(CheckReport("liu-projection", n, pn, rhs, tol, regime=QUADRATURE, point=x, m=F.m))
            out.append(CheckReport("projection-below-norm", n, pn, opn, 1e-12 * max(1.0, opn), point=x, m=F.m))
    return out


def check_liu_hyperbolic(g: BoundaryData, q: SphereQuadrature, x, y) -> CheckReport:
    """|f(x) - f(y)| <= (|B_{n-1}|/|B_n|) d(x, y), Euclidean on the left."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    n = x.size
    _reject_n3(n, "the hyperbolic Lipschitz bound")
    F = _field(g, q)
    est = F.estimate(np.stack([x, y]))
    diff = est.value[0] - est.value[1]
    se = _norm_se(est.value_se)
    d = float(hyperbolic_metric(x, y)) if not np.array_equal(x, y) else 0.0
    rhs = liu_constant(n) / 2.0 * d
    return CheckReport("liu-hyperbolic", n, np.sqrt(diff @ diff), rhs, _quad_tol(se), regime=QUADRATURE, point=[x, y], m=F.m)


def check_kalaj_vuorinen(g: BoundaryData, q: SphereQuadrature, z, variant="original") -> CheckReport:
    """Planar bound |grad f| <= (4/pi) h(|f|) / (1 - |z|^2).

    ``h(t) = 1 - t^2`` for the original variant and ``cos(pi t / 2)`` for the
    sharper one; the latter never exceeds the former.
    """
    z = np.asarray(z, dtype=np.float64)
    if z.size != 2:
        raise DimensionError("this bound is planar (n = 2)")
    F = _field(g, q)
    if F.m != 1:
        raise ValueError("scalar data required")
    est = F.estimate(z)
    u = float(est.value[0])
    grad = est.jac[0]
    base = 4.0 / math.pi / (1.0 - _sq(z))
    orig = base * (1.0 - u * u)
    chen = base * math.cos(math.pi * abs(u) / 2.0)
    if variant == "original":
        rhs = orig
    elif variant == "chen":
        rhs = chen
    else:
        raise ValueError(f"unknown variant {variant!r}")
    # the right side moves with f(z) too: 2|u| du for the original, (pi/2) du for the sharper form
    se = _norm_se(est.jac_se[0]) + base * math.pi * float(est.value_se[0])
    return CheckReport(
        f"kalaj-vuorinen-{variant}", 2, np.sqrt(grad @ grad), rhs, _quad_tol(se), regime=QUADRATURE, point=z, m=1,
        params={"f": u, "rhs_original": orig, "rhs_chen": chen},
    )


def counterexample_probe_conjecture(g: BoundaryData, q: SphereQuadrature, x) -> CheckReport:
    """|grad f| / (1 - f^2) against C_n / (1 - |x|^2); recorded, never asserted."""
    x = np.asarray(x, dtype=np.float64)
    n = x.size
    if n < 4:
        raise DimensionError("the conjectured bound concerns n >= 4")
    F = _field(g, q)
    est = F.estimate(x)
    u = float(est.value[0])
    grad = est.jac[0]
    lhs = float(np.sqrt(grad @ grad)) / (1.0 - u * u)
    rhs = liu_constant(n) / (1.0 - _sq(x))
    return CheckReport("conjecture-probe", n, lhs, rhs, 0.0, regime=INFORMATIONAL, point=x, m=1, params={"f": u})


def probe_search(n, q, rng, trials=50, radius=0.9) -> CheckReport:
    """Random search over offset near-extremal data; returns the smallest-margin probe."""
    best = None
    for _ in range(trials):
        u = random_sphere(rng, 1, n)[0]
        g = BoundaryData.offset_step(n, rng.uniform(-0.9, 0.9), rng.uniform(1.0, 8.0), u)
        r = radius * rng.random()
        x = r * random_sphere(rng, 1, n)[0]
        rep = counterexample_probe_conjecture(g, q, x)
        if best is None or rep.margin < best.margin:
            best = rep
    return best
