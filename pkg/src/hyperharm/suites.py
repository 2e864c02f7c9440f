"""Randomised check suites driven by the command line.

Each suite maps ``(n, trial, rng, ctx)`` to a list of reports.  Generators are
seeded from ``(seed, crc32(suite), n, trial)`` so any single trial can be
replayed in isolation and the output does not depend on execution order.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass, field

import numpy as np

from . import clifford, hypercomplex, inequalities, mobius, octonion
from .harmonic import (
    AtomicHarmonic,
    BoundaryData,
    PoissonIntegral,
    SphereQuadrature,
    extremal_function,
    harmonicity_residual,
    hua_transform,
    laplace_invariance_check,
    random_ball,
    random_sphere,
)
from .report import FD, QUADRATURE, CheckReport, identity_report

SAMPLE_RADIUS = 0.95
FIELD_RADIUS = 0.9


class SuiteError(ValueError):
    """Unknown suite or a dimension the suite does not accept."""


@dataclass
class Context:
    seed: int
    quad_size: int | None = None
    _quads: dict = field(default_factory=dict)

    def quad(self, n):
        if n not in self._quads:
            self._quads[n] = SphereQuadrature.build(n, self.quad_size, seed=self.seed)
        return self._quads[n]


def trial_rng(seed, suite, n, trial):
    return np.random.default_rng([seed & 0xFFFFFFFFFFFFFFFF, zlib.crc32(suite.encode()), n, trial])


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------


def mobius_identities(n, trial, rng, ctx):
    a, x, y, z = random_ball(rng, 4, n, SAMPLE_RADIUS)
    out = [
        mobius.involution_check(a, x),
        mobius.one_minus_phi_sq_check(a, x),
        mobius.product_identity_check(a, x),
        mobius.bracket_check(x, a),
        mobius.stoll_identity_check(a, x, y),
        mobius.gradient_range_check(a, x),
        mobius.fact_inequality_check(x, y),
        mobius.tri_inequality_check(x, y, z),
    ]
    diff = mobius.mobius_clifford_form(a, x) - mobius.mobius_map(a, x)
    out.append(CheckReport("mobius-clifford-form", n, np.sqrt(diff @ diff), 0.0, 1e-11, point=[a, x]))
    big, small = (x, y) if x @ x > y @ y else (y, x)
    if big @ big > small @ small:
        out.append(mobius.main_fact_check(big, small))
    d = mobius.hyperbolic_metric(x, y)
    s, t = rng.random(2)
    gs, gt = mobius.geodesic(x, y, s), mobius.geodesic(x, y, t)
    dst = mobius.hyperbolic_metric(gs, gt) if not np.allclose(gs, gt, rtol=0, atol=1e-15) else 0.0
    out.append(identity_report("geodesic-affine", n, dst, abs(s - t) * d, 1e-9, point=[x, y]))
    return out


def clifford_suite(m, trial, rng, ctx):
    D = 1 << m
    a, b, c = rng.standard_normal((3, D))
    x = clifford.paravector_coeffs(rng.standard_normal(m + 1))
    na, nx = clifford.norm_coeffs(a), clifford.norm_coeffs(x)
    ax = clifford.norm_coeffs(clifford.mul_coeffs(a, x, m))
    xa = clifford.norm_coeffs(clifford.mul_coeffs(x, a, m))
    out = [
        identity_report("modulus-left", m, ax, na * nx, 1e-12, relative=True),
        identity_report("modulus-right", m, xa, na * nx, 1e-12, relative=True),
    ]
    ab_c = clifford.mul_coeffs(clifford.mul_coeffs(a, b, m), c, m)
    a_bc = clifford.mul_coeffs(a, clifford.mul_coeffs(b, c, m), m)
    scale = 1.0 + na * clifford.norm_coeffs(b) * clifford.norm_coeffs(c)
    out.append(CheckReport("associativity", m, np.abs(ab_c - a_bc).max(), 0.0, 1e-12 * scale))
    lhs = clifford.conj_coeffs(clifford.mul_coeffs(a, b, m), m)
    rhs = clifford.mul_coeffs(clifford.conj_coeffs(b, m), clifford.conj_coeffs(a, m), m)
    out.append(CheckReport("conj-anti-automorphism", m, np.abs(lhs - rhs).max(), 0.0, 1e-12 * scale))
    inv = clifford.mv_inverse(clifford.MultiVector(m, a))
    one = clifford.mul_coeffs(a, inv.coeffs, m)
    one[0] -= 1.0
    out.append(CheckReport("inverse-residual", m, np.abs(one).max(), 0.0, 1e-10))
    return out


def octonion_suite(n, trial, rng, ctx):
    a, b, c = rng.standard_normal((3, 8))
    mul, nrm = octonion.mul_coeffs, octonion.norm_coeffs
    scale = 1.0 + nrm(a) * nrm(b) * nrm(c)
    out = [
        identity_report("octonion-composition", 8, nrm(mul(a, b)), nrm(a) * nrm(b), 1e-12, relative=True),
        CheckReport("octonion-left-alternative", 8, np.abs(mul(a, mul(a, b)) - mul(mul(a, a), b)).max(), 0.0, 1e-12 * scale),
        CheckReport("octonion-right-alternative", 8, np.abs(mul(mul(a, b), b) - mul(a, mul(b, b))).max(), 0.0, 1e-12 * scale),
        CheckReport(
            "octonion-moufang", 8,
            np.abs(mul(mul(a, b), mul(c, a)) - mul(a, mul(mul(b, c), a))).max(), 0.0, 1e-12 * scale * (1.0 + nrm(a)),
        ),
    ]
    conj_ab = octonion.conj_coeffs(mul(a, b))
    out.append(CheckReport("octonion-conj", 8, np.abs(conj_ab - mul(octonion.conj_coeffs(b), octonion.conj_coeffs(a))).max(), 0.0, 1e-12 * scale))
    return out


def main_sharp_suite(n, trial, rng, ctx):
    f = AtomicHarmonic.random(n, rng)
    x = random_ball(rng, 1, n, SAMPLE_RADIUS)[0]
    out = [inequalities.check_main_sharp(f, x)]
    a = random_ball(rng, 1, n, SAMPLE_RADIUS)[0]
    xi = random_sphere(rng, 1, n)[0]
    e = extremal_function(a, xi, float(np.exp(rng.uniform(-2, 2))))
    rep = inequalities.check_main_sharp(e, random_ball(rng, 1, n, FIELD_RADIUS)[0])
    out.append(identity_report("main-sharp-extremal", n, rep.lhs, rep.rhs, 1e-9, relative=True, point=rep.point))
    return out


def main_ball_suite(n, trial, rng, ctx):
    f = AtomicHarmonic.random(n, rng)
    x, y = random_ball(rng, 2, n, SAMPLE_RADIUS)
    return inequalities.check_main_ball(f, x, y) + inequalities.check_geodesic_integral(f, x, y, steps=64)


def liu_suite(n, trial, rng, ctx):
    q = ctx.quad(n)
    out = []
    if trial == 0:
        # rotated extremal U o T under Monte Carlo; the panel rules need the cut at xi_1 = 0
        T = inequalities.random_rotation(n, int(rng.integers(2**32)) if q.monte_carlo else None)
        g = BoundaryData.hemisphere(n, direction=T[0])
        rep = inequalities.check_liu_scalar(g, q, np.zeros(n))
        tol = 1e-8 if not q.monte_carlo else rep.tol
        out.append(identity_report("liu-equality-at-zero", n, rep.lhs, inequalities.liu_constant(n), tol, regime=QUADRATURE))
    g = BoundaryData.random_smooth(n, 1, rng)
    x = random_ball(rng, 1, n, FIELD_RADIUS)[0]
    out.append(inequalities.check_liu_scalar(g, q, x))
    if n == 2:
        out.append(inequalities.check_kalaj_vuorinen(g, q, x, "original"))
        out.append(inequalities.check_kalaj_vuorinen(g, q, x, "chen"))
    return out


def liu_vector_suite(n, trial, rng, ctx):
    q = ctx.quad(n)
    m = int(rng.integers(2, 4))
    g = BoundaryData.random_smooth(n, m, rng)
    x, y = random_ball(rng, 2, n, FIELD_RADIUS)
    return inequalities.check_liu_vector(g, q, x, directions=2, rng=rng) + [inequalities.check_liu_hyperbolic(g, q, x, y)]


def harmonic_suite(n, trial, rng, ctx):
    out = []
    f = AtomicHarmonic.random(n, rng)
    a = random_ball(rng, 1, n, 0.6)[0]
    x = random_ball(rng, 1, n, 0.6)[0]
    out.append(CheckReport("atomic-harmonic", n, harmonicity_residual(f, x), 0.0, 1e-3, regime=FD, point=x))
    out.append(CheckReport("hua-harmonic", n, harmonicity_residual(hua_transform(f, a), x), 0.0, 1e-3, regime=FD, point=[a, x]))
    out.append(laplace_invariance_check(random_polynomial(n, rng, 4), a, x))
    P = PoissonIntegral(BoundaryData.constant(n, 1.0), ctx.quad(n))
    est = P.estimate(x)
    out.append(identity_report("mean-value", n, est.value[0], 1.0, max(1e-8, 5 * float(est.value_se[0])), regime=QUADRATURE, point=x))
    return out


def random_polynomial(n, rng, degree):
    """Random polynomial of the given degree as a vectorised callable."""
    terms = []
    for _ in range(3 * n):
        exps = np.zeros(n, dtype=int)
        for _ in range(int(rng.integers(0, degree + 1))):
            exps[rng.integers(n)] += 1
        terms.append((float(rng.standard_normal()), exps))

    def X(x):
        x = np.asarray(x, dtype=np.float64)
        return sum(c * np.prod(x**e, axis=-1) for c, e in terms)

    return X


def dirac_suite(n, trial, rng, ctx):
    dim = n + 1
    x = random_ball(rng, 1, dim, 0.9)[0]
    out = [hypercomplex.laplacian_factorization_check(hypercomplex.random_quadratic_clifford(dim, rng), x)]
    i = int(rng.integers(1, dim))
    Dz = hypercomplex.dirac_fd(hypercomplex.fueter_variable(dim, i), x)
    out.append(CheckReport("fueter-monogenic", dim, np.sqrt(np.sum(Dz**2)), 0.0, 1e-6, regime=FD, point=x))
    return out


def octonion_dirac_suite(n, trial, rng, ctx):
    x = random_ball(rng, 1, 8, 0.9)[0]
    out = [hypercomplex.oct_factorization_check(hypercomplex.random_quadratic_octonion(rng), x)]
    i = int(rng.integers(1, 8))
    Dz = hypercomplex.oct_dirac_fd(hypercomplex.fueter_variable(8, i, octonionic=True), x)
    out.append(CheckReport("octonion-fueter-monogenic", 8, np.sqrt(np.sum(Dz**2)), 0.0, 1e-6, regime=FD, point=x))
    return out


def zhang_suite(n, trial, rng, ctx, points=5):
    dim = n + 1
    a = random_ball(rng, 1, dim, 0.8)[0]
    F = hypercomplex.admissible_clifford_field(dim, a, rng)
    out = []
    for k, x in enumerate(random_ball(rng, points, dim, 0.99)):
        out += hypercomplex.check_zhang_improved(F, a, x, with_gradient=(k == 0))
    return out


def wang_suite(n, trial, rng, ctx, points=5):
    a = random_ball(rng, 1, 8, 0.8)[0]
    F = hypercomplex.admissible_octonion_field(a, rng)
    out = []
    for x in random_ball(rng, points, 8, 0.99):
        out += hypercomplex.check_wang(F, a, x)
    return out


def probe_suite(n, trial, rng, ctx):
    return [inequalities.probe_search(n, ctx.quad(n), rng, trials=5)]


# name -> (function, dimension predicate or None, fixed dimension or None)
SUITES = {
    "mobius-identities": (mobius_identities, lambda n: n >= 2, None),
    "clifford": (clifford_suite, lambda n: 0 <= n <= clifford.MAX_GENERATORS, None),
    "octonion": (octonion_suite, None, 8),
    "main-sharp": (main_sharp_suite, lambda n: n >= 2, None),
    "main-ball": (main_ball_suite, lambda n: n >= 2, None),
    "liu": (liu_suite, lambda n: n >= 2, None),
    "liu-vector": (liu_vector_suite, lambda n: n == 2 or n >= 4, None),
    "harmonic": (harmonic_suite, lambda n: n >= 2, None),
    "dirac": (dirac_suite, lambda n: 1 <= n <= 8, None),
    "octonion-dirac": (octonion_dirac_suite, None, 8),
    "zhang": (zhang_suite, lambda n: 2 <= n <= 8, None),
    "wang": (wang_suite, None, 8),
    "probe": (probe_suite, lambda n: n >= 4, None),
}


def resolve(names):
    out = []
    for name in names:
        if name == "all":
            out.extend(s for s in SUITES if s not in out)
        elif name in SUITES:
            if name not in out:
                out.append(name)
        else:
            raise SuiteError(f"unknown suite {name!r}; choose from {', '.join(['all', *SUITES])}")
    return out


def run_suites(names, dims, trials, seed, quad_size=None, tol_overrides=None):
    """Run suites and return ``[(record_key, report, trial)]`` sorted by (check, n, trial).

    Dimension-restricted suites raise :class:`SuiteError` for an explicitly
    requested suite and skip the dimension silently under ``all``.
    """
    explicit = "all" not in names
    ctx = Context(seed, quad_size)
    results = []
    for name in resolve(names):
        func, accepts, fixed = SUITES[name]
        if fixed is not None:
            run_dims = [fixed]
        else:
            run_dims = []
            for n in dims:
                if accepts(n):
                    run_dims.append(n)
                elif explicit:
                    raise SuiteError(f"suite {name!r} does not accept dimension {n}")
        for n in run_dims:
            for trial in range(trials):
                rng = trial_rng(seed, name, n, trial)
                for rep in func(n, trial, rng, ctx):
                    if tol_overrides and rep.check in tol_overrides:
                        rep.tol = float(tol_overrides[rep.check])
                    results.append((rep, trial))
    results.sort(key=lambda r: (r[0].check, r[0].n, r[1]))
    return results
