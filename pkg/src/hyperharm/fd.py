"""Central finite-difference derivatives of array-valued fields.

Fields take points with coordinates on the last axis and return either a
scalar or an array with trailing value axes.
"""

import numpy as np

GRAD_STEP = 1e-5
LAPLACE_STEP = 1e-3


def _shifts(x, h):
    x = np.asarray(x, dtype=np.float64)
    n = x.shape[-1]
    E = h * np.eye(n)
    return x[..., None, :] + E, x[..., None, :] - E


def jacobian(f, x, h=GRAD_STEP):
    """d f / d x_i stacked on the last axis: shape value_shape + (n,)."""
    x = np.asarray(x, dtype=np.float64)
    plus, minus = _shifts(x, h)
    # the stencil axis sits right after the batch axes; move it to the end
    d = (np.asarray(f(plus)) - np.asarray(f(minus))) / (2.0 * h)
    return np.moveaxis(d, x.ndim - 1, -1)


def gradient(f, x, h=GRAD_STEP):
    return jacobian(f, x, h)


def second_partials(f, x, h=LAPLACE_STEP):
    """Unmixed second differences d^2 f / d x_i^2, stacked on the last axis."""
    x = np.asarray(x, dtype=np.float64)
    plus, minus = _shifts(x, h)
    f0 = np.asarray(f(x))
    fp = np.asarray(f(plus))
    fm = np.asarray(f(minus))
    f0 = np.expand_dims(f0, x.ndim - 1)
    d = (fp - 2.0 * f0 + fm) / h**2
    return np.moveaxis(d, x.ndim - 1, -1)


def laplacian(f, x, h=LAPLACE_STEP):
    """Return ``(lap, scale)`` with ``scale = sum |d^2 f / d x_i^2|``.

    ``scale`` is the size of the terms that cancel when f is harmonic, the
    natural yardstick for a relative harmonicity residual.
    """
    d = second_partials(f, x, h)
    return d.sum(axis=-1), np.abs(d).sum(axis=-1)


def laplacian_richardson(f, x, h=LAPLACE_STEP):
    """Fourth-order Laplacian from steps h and h/2."""
    l1, s1 = laplacian(f, x, h)
    l2, s2 = laplacian(f, x, h / 2.0)
    return (4.0 * l2 - l1) / 3.0, s2
