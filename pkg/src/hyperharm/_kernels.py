"""Hot inner loops, each in two flavours.

Every kernel exists as a pure-numpy routine (``*_numpy``) and as an explicit
loop nest compiled with numba (``*_numba``).  The public name points at the
numba version unless ``HYPERHARM_NUMBA=0`` is set or numba is not importable.
Both flavours are always importable so tests and the benchmark can compare
them directly.
"""

import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


USE_NUMBA = HAVE_NUMBA and os.environ.get("HYPERHARM_NUMBA", "1").strip().lower() not in (
    "0",
    "false",
    "no",
    "off",
)


# ---------------------------------------------------------------------------
# bilinear products given by a (sign, index) multiplication table
# ---------------------------------------------------------------------------


def table_product_numpy(a, b, sign, index):
    """c[..., index[A, B]] += sign[A, B] * a[..., A] * b[..., B] for batched rows."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    out = np.zeros(np.broadcast_shapes(a.shape, b.shape))
    for A in range(sign.shape[0]):
        coef = a[..., A : A + 1]
        if not coef.any():
            continue
        # each row of the table is a permutation of the basis
        out[..., index[A]] += sign[A] * coef * b
    return out


@njit(cache=True)
def _table_product_loop(a, b, sign, index, out):
    N, D = a.shape
    for k in range(N):
        for A in range(D):
            aA = a[k, A]
            if aA == 0.0:
                continue
            for B in range(D):
                out[k, index[A, B]] += sign[A, B] * aA * b[k, B]
    return out


def table_product_numba(a, b, sign, index):
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    shape = np.broadcast_shapes(a.shape, b.shape)
    D = shape[-1]
    a2 = np.ascontiguousarray(np.broadcast_to(a, shape).reshape(-1, D))
    b2 = np.ascontiguousarray(np.broadcast_to(b, shape).reshape(-1, D))
    out = np.zeros_like(a2)
    _table_product_loop(a2, b2, sign.astype(np.float64), index.astype(np.int64), out)
    return out.reshape(shape)


# ---------------------------------------------------------------------------
# Poisson-kernel moments over a weighted node set
# ---------------------------------------------------------------------------


def poisson_moments_numpy(x, nodes, qw, vals, center):
    """Weighted sums of P(x, xi)(g(xi) - c) and of its x-gradient.

    Returns ``val (B, m)``, ``jac (B, m, n)`` and the matching weighted sums of
    squares ``val2``, ``jac2`` (used for Monte Carlo standard errors).
    """
    B, n = x.shape
    m = vals.shape[1]
    val = np.empty((B, m))
    jac = np.empty((B, m, n))
    val2 = np.empty((B, m))
    jac2 = np.empty((B, m, n))
    for k in range(B):
        xk = x[k]
        diff = xk - nodes  # (N, n)
        r2 = np.einsum("ij,ij->i", diff, diff)
        s = 1.0 - xk @ xk
        rn = r2 ** (n / 2.0)
        P = s / rn
        # gradient of the kernel in x
        gP = -2.0 * xk / rn[:, None] - (n * s / (rn * r2))[:, None] * diff
        dv = vals - center[k]
        wv = qw[:, None] * dv
        sv = P[:, None] * dv
        val[k] = P @ wv
        val2[k] = qw @ (sv * sv)
        sj = dv[:, :, None] * gP[:, None, :]
        jac[k] = np.einsum("i,ijl->jl", qw, sj)
        jac2[k] = np.einsum("i,ijl->jl", qw, sj * sj)
    return val, jac, val2, jac2


@njit(cache=True)
def _poisson_moments_loop(x, nodes, qw, vals, center, val, jac, val2, jac2):
    B, n = x.shape
    N = nodes.shape[0]
    m = vals.shape[1]
    gP = np.empty(n)
    for k in range(B):
        xx = 0.0
        for i in range(n):
            xx += x[k, i] * x[k, i]
        s = 1.0 - xx
        for q in range(N):
            r2 = 0.0
            for i in range(n):
                d = x[k, i] - nodes[q, i]
                r2 += d * d
            rn = r2 ** (0.5 * n)
            P = s / rn
            c2 = n * s / (rn * r2)
            for i in range(n):
                gP[i] = -2.0 * x[k, i] / rn - c2 * (x[k, i] - nodes[q, i])
            w = qw[q]
            for j in range(m):
                dv = vals[q, j] - center[k, j]
                sv = P * dv
                val[k, j] += w * sv
                val2[k, j] += w * sv * sv
                for i in range(n):
                    sj = dv * gP[i]
                    jac[k, j, i] += w * sj
                    jac2[k, j, i] += w * sj * sj


def poisson_moments_numba(x, nodes, qw, vals, center):
    B, n = x.shape
    m = vals.shape[1]
    val = np.zeros((B, m))
    jac = np.zeros((B, m, n))
    val2 = np.zeros((B, m))
    jac2 = np.zeros((B, m, n))
    _poisson_moments_loop(
        np.ascontiguousarray(x, dtype=np.float64),
        np.ascontiguousarray(nodes, dtype=np.float64),
        np.ascontiguousarray(qw, dtype=np.float64),
        np.ascontiguousarray(vals, dtype=np.float64),
        np.ascontiguousarray(center, dtype=np.float64),
        val,
        jac,
        val2,
        jac2,
    )
    return val, jac, val2, jac2


# ---------------------------------------------------------------------------
# finite atomic Herglotz measures: f = sum_k w_k P(., xi_k)
# ---------------------------------------------------------------------------


def atomic_eval_grad_numpy(weights, sites, x):
    """Value and gradient of batched atomic harmonic functions.

    ``weights (B, K)``, ``sites (B, K, n)``, ``x (B, n)``; zero weights pad
    batches whose members carry fewer atoms.
    """
    n = x.shape[-1]
    diff = x[:, None, :] - sites
    r2 = np.einsum("bkn,bkn->bk", diff, diff)
    s = 1.0 - np.einsum("bn,bn->b", x, x)
    rn = r2 ** (n / 2.0)
    val = np.einsum("bk,bk->b", weights, s[:, None] / rn)
    gP = -2.0 * x[:, None, :] / rn[..., None] - (n * s[:, None] / (rn * r2))[..., None] * diff
    grad = np.einsum("bk,bkn->bn", weights, gP)
    return val, grad


@njit(cache=True)
def _atomic_loop(weights, sites, x, val, grad):
    B, K = weights.shape
    n = x.shape[1]
    for b in range(B):
        xx = 0.0
        for i in range(n):
            xx += x[b, i] * x[b, i]
        s = 1.0 - xx
        for k in range(K):
            w = weights[b, k]
            if w == 0.0:
                continue
            r2 = 0.0
            for i in range(n):
                d = x[b, i] - sites[b, k, i]
                r2 += d * d
            rn = r2 ** (0.5 * n)
            val[b] += w * s / rn
            c2 = n * s / (rn * r2)
            for i in range(n):
                grad[b, i] += w * (-2.0 * x[b, i] / rn - c2 * (x[b, i] - sites[b, k, i]))


def atomic_eval_grad_numba(weights, sites, x):
    B = x.shape[0]
    val = np.zeros(B)
    grad = np.zeros((B, x.shape[1]))
    _atomic_loop(
        np.ascontiguousarray(weights, dtype=np.float64),
        np.ascontiguousarray(sites, dtype=np.float64),
        np.ascontiguousarray(x, dtype=np.float64),
        val,
        grad,
    )
    return val, grad


if USE_NUMBA:
    table_product = table_product_numba
    poisson_moments = poisson_moments_numba
    atomic_eval_grad = atomic_eval_grad_numba
else:
    table_product = table_product_numpy
    poisson_moments = poisson_moments_numpy
    atomic_eval_grad = atomic_eval_grad_numpy


def backend():
    return "numba" if USE_NUMBA else "numpy"
