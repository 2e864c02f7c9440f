"""Moebius self-maps of the unit ball, the hyperbolic metric, and the identities
and inequalities they satisfy.

Points are numpy arrays with the coordinates on the trailing axis; every
vectorised function broadcasts over leading axes.
"""

from __future__ import annotations

import numpy as np

from . import clifford
from .report import CheckReport, PreconditionError, identity_report

BOUNDARY_GAP = 1e-9


def _sq(x):
    return np.einsum("...i,...i->...", x, x)


def _dot(x, y):
    return np.einsum("...i,...i->...", x, y)


def _as_points(*pts):
    out = []
    for p in pts:
        p = np.asarray(p)
        out.append(p if np.iscomplexobj(p) else p.astype(np.float64))
    return out


def require_interior(*pts):
    for p in pts:
        if np.any(1.0 - np.sqrt(_sq(p)) < BOUNDARY_GAP):
            raise ValueError("point lies on or too close to the unit sphere for a metric computation")


def bracket_sq(x, a):
    x, a = _as_points(x, a)
    return 1.0 + _sq(a) * _sq(x) - 2.0 * _dot(a, x)


def bracket(x, a):
    """[x, a] = sqrt(1 + |a|^2 |x|^2 - 2 <a, x>), which equals |1 - x conj(a)|."""
    return np.sqrt(np.maximum(bracket_sq(x, a), 0.0))


def bracket_clifford(x, a):
    """|1 - x conj(a)| evaluated with paravectors in R_{0,n-1}."""
    x, a = _as_points(x, a)
    m = x.shape[-1] - 1
    prod = clifford.mul_coeffs(clifford.paravector_coeffs(x), clifford.conj_coeffs(clifford.paravector_coeffs(a), m), m)
    prod = -prod
    prod[..., 0] += 1.0
    return clifford.norm_coeffs(prod)


def mobius_map(a, x):
    """phi_a(x); swaps 0 and a and is its own inverse."""
    a, x = _as_points(a, x)
    d = a - x
    num = (1.0 - _sq(a))[..., None] * d + _sq(d)[..., None] * a
    return num / bracket_sq(x, a)[..., None]


def mobius_clifford_form(a, x, cond_max=1e12):
    """phi_a(x) = (1 - x conj(a))^{-1} (a - x), through a general multivector inverse."""
    a, x = _as_points(a, x)
    pa = clifford.MultiVector.paravector(a)
    px = clifford.MultiVector.paravector(x)
    left = clifford.mv_inverse(1.0 - px * clifford.mv_conj(pa), cond_max=cond_max)
    return (left * (pa - px)).vector()


def one_minus_phi_sq(a, x):
    """Closed form of 1 - |phi_a(x)|^2."""
    a, x = _as_points(a, x)
    return (1.0 - _sq(a)) * (1.0 - _sq(x)) / bracket_sq(x, a)


def mobius_grad_norm(a, x):
    """Operator norm of the Jacobian of phi_a at x (the map is conformal)."""
    a, x = _as_points(a, x)
    return (1.0 - _sq(a)) / bracket_sq(x, a)


def mobius_jacobian(a, x):
    """Analytic Jacobian d phi_a / dx, shape (..., n, n)."""
    a, x = _as_points(a, x)
    d = a - x
    b2 = bracket_sq(x, a)
    num = (1.0 - _sq(a))[..., None] * d + _sq(d)[..., None] * a
    n = x.shape[-1]
    eye = np.eye(n)
    # d num_i / d x_j = -(1-|a|^2) delta_ij - 2 a_i d_j
    dnum = -(1.0 - _sq(a))[..., None, None] * eye - 2.0 * a[..., :, None] * d[..., None, :]
    # d b2 / d x_j = 2 |a|^2 x_j - 2 a_j
    db2 = 2.0 * _sq(a)[..., None] * x - 2.0 * a
    return dnum / b2[..., None, None] - num[..., :, None] * db2[..., None, :] / (b2**2)[..., None, None]


def pseudo_metric(x, y):
    x, y = _as_points(x, y)
    require_interior(x, y)
    return np.sqrt(_sq(mobius_map(y, x)))


def hyperbolic_metric(x, y):
    return 2.0 * np.arctanh(pseudo_metric(x, y))


def geodesic(x, y, t):
    """Point at hyperbolic arclength fraction t along the geodesic from x to y."""
    x, y = _as_points(x, y)
    t = np.asarray(t, dtype=np.float64)
    w = mobius_map(x, y)
    r = np.sqrt(_sq(w))
    if r == 0.0:
        return np.broadcast_to(x, t.shape + x.shape).copy()
    p = (np.tanh(t * np.arctanh(r)) / r)[..., None] * w
    return mobius_map(x, p)


def geodesic_speed(x, y, t):
    """Euclidean speed |gamma'(t)| of :func:`geodesic`."""
    x, y = _as_points(x, y)
    t = np.asarray(t, dtype=np.float64)
    w = mobius_map(x, y)
    r = np.sqrt(_sq(w))
    if r == 0.0:
        return np.zeros(t.shape)
    s = np.arctanh(r)
    p = (np.tanh(t * s) / r)[..., None] * w
    return mobius_grad_norm(x, p) * s / np.cosh(t * s) ** 2


# ---------------------------------------------------------------------------
# checks
# ---------------------------------------------------------------------------


def involution_check(a, x, tol=1e-11) -> CheckReport:
    a, x = _as_points(a, x)
    resid = np.sqrt(_sq(mobius_map(a, mobius_map(a, x)) - x))
    return CheckReport("mobius-involution", x.size, resid, 0.0, tol, point=[a, x])


def one_minus_phi_sq_check(a, x, tol=1e-11) -> CheckReport:
    a, x = _as_points(a, x)
    direct = 1.0 - _sq(mobius_map(a, x))
    return identity_report("one-minus-phi-sq", x.size, direct, one_minus_phi_sq(a, x), tol, point=[a, x])


def product_identity_check(a, x, tol=1e-11) -> CheckReport:
    """|1 - x conj(a)| |1 - y conj(a)| = 1 - |a|^2 with y = phi_a(x)."""
    a, x = _as_points(a, x)
    y = mobius_map(a, x)
    lhs = bracket_clifford(x, a) * bracket_clifford(y, a)
    return identity_report("product-identity", x.size, lhs, 1.0 - _sq(a), tol, point=[a, x])


def bracket_check(x, a, tol=1e-11) -> CheckReport:
    x, a = _as_points(x, a)
    return identity_report("bracket-clifford", x.size, bracket(x, a), bracket_clifford(x, a), tol, point=[x, a])


def stoll_identity_check(a, x, y, tol=1e-11) -> CheckReport:
    """Invariance of |x - y|^2 / ((1 - |x|^2)(1 - |y|^2)) under phi_a."""
    a, x, y = _as_points(a, x, y)
    px, py = mobius_map(a, x), mobius_map(a, y)
    left = _sq(px - py) / ((1.0 - _sq(px)) * (1.0 - _sq(py)))
    right = _sq(x - y) / ((1.0 - _sq(x)) * (1.0 - _sq(y)))
    return identity_report("stoll-identity", x.size, left, right, tol, relative=True, point=[a, x, y])


def fact_inequality_check(x, y, rtol=1e-12) -> CheckReport:
    """(1 + rho) / (1 - rho) >= (1 - |y|^2) / (1 - |x|^2)."""
    x, y = _as_points(x, y)
    rho = pseudo_metric(x, y)
    lhs = (1.0 - _sq(y)) / (1.0 - _sq(x))
    rhs = (1.0 + rho) / (1.0 - rho)
    return CheckReport("fact-inequality", x.size, lhs, rhs, rtol * max(1.0, rhs), point=[x, y])


def main_fact_check(x, y, rtol=1e-12) -> CheckReport:
    """|1 - x conj(y)| + |x - y| >= 1 - |y|^2, valid when |x| > |y|."""
    x, y = _as_points(x, y)
    if not _sq(x) > _sq(y):
        raise PreconditionError("main fact inequality requires |x| > |y|")
    lhs = 1.0 - _sq(y)
    rhs = bracket_clifford(x, y) + np.sqrt(_sq(x - y))
    trivial = bool(np.sqrt(_sq(x - y)) >= lhs)
    return CheckReport("main-fact", x.size, lhs, rhs, rtol, point=[x, y], params={"trivial_case": trivial})


def tri_inequality_check(x, y, z, rtol=1e-12) -> CheckReport:
    """Two-sided pseudo-hyperbolic triangle bounds; margin is the tighter side."""
    x, y, z = _as_points(x, y, z)
    rxz, rzy, rxy = pseudo_metric(x, z), pseudo_metric(z, y), pseudo_metric(x, y)
    lower = abs(rxz - rzy) / (1.0 - rxz * rzy)
    upper = (rxz + rzy) / (1.0 + rxz * rzy)
    lo_margin = rxy - lower
    hi_margin = upper - rxy
    if lo_margin <= hi_margin:
        lhs, rhs = lower, rxy
    else:
        lhs, rhs = rxy, upper
    return CheckReport(
        "tri-inequality", x.size, lhs, rhs, rtol, point=[x, y, z],
        params={"lower": float(lower), "rho_xy": float(rxy), "upper": float(upper)},
    )


def gradient_range_check(a, x, rtol=1e-12) -> CheckReport:
    """(1 - |a|) / (1 + |a|) <= ||grad phi_a(x)|| <= (1 + |a|) / (1 - |a|)."""
    a, x = _as_points(a, x)
    g = mobius_grad_norm(a, x)
    r = np.sqrt(_sq(a))
    lo, hi = (1.0 - r) / (1.0 + r), (1.0 + r) / (1.0 - r)
    lhs, rhs = (lo, g) if g - lo <= hi - g else (g, hi)
    return CheckReport("mobius-gradient-range", x.size, lhs, rhs, rtol * hi, point=[a, x])
