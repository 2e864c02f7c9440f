import os
import subprocess
import sys

import numpy as np
import pytest

from hyperharm import _kernels as K
from hyperharm.clifford import product_table
from hyperharm.harmonic import SphereQuadrature, random_atomic_batch, random_ball

needs_numba = pytest.mark.skipif(not K.HAVE_NUMBA, reason="numba not installed")


@needs_numba
def test_table_product_agrees(rng):
    sign, index = product_table(5)
    a = rng.standard_normal((7, 32))
    b = rng.standard_normal(32)
    np.testing.assert_allclose(K.table_product_numba(a, b, sign, index), K.table_product_numpy(a, b, sign, index), atol=1e-13)


@needs_numba
def test_poisson_moments_agree(rng):
    q = SphereQuadrature.build(4, 2000, seed=3)
    x = random_ball(rng, 5, 4)
    vals = np.stack([np.sign(q.nodes[:, 0]), q.nodes[:, 1] ** 2], axis=1)
    center = rng.standard_normal((5, 2))
    a = K.poisson_moments_numpy(x, q.nodes, q.weights, vals, center)
    b = K.poisson_moments_numba(x, q.nodes, q.weights, vals, center)
    for u, v in zip(a, b):
        np.testing.assert_allclose(u, v, rtol=1e-12, atol=1e-12)


@needs_numba
def test_atomic_agrees(rng):
    w, s = random_atomic_batch(3, rng, 50)
    x = random_ball(rng, 50, 3)
    for u, v in zip(K.atomic_eval_grad_numpy(w, s, x), K.atomic_eval_grad_numba(w, s, x)):
        np.testing.assert_allclose(u, v, rtol=1e-12)


@pytest.mark.parametrize("flag,expected", [("0", "numpy"), ("off", "numpy")])
def test_env_flag_selects_numpy(flag, expected):
    env = dict(os.environ, HYPERHARM_NUMBA=flag)
    out = subprocess.run(
        [sys.executable, "-c", "from hyperharm._kernels import backend; print(backend())"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == expected
