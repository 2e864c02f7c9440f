"""Time the numba kernels against their numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Each kernel is run once untimed to absorb JIT compilation, then the best of
``--repeat`` wall-clock runs is reported.  Outputs are compared as a sanity check.
"""

import argparse
import time

import numpy as np

from hyperharm import _kernels as K
from hyperharm.clifford import product_table
from hyperharm.harmonic import SphereQuadrature, random_atomic_batch, random_ball


def best_of(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def cases(rng):
    sign, index = product_table(8)
    a, b = rng.standard_normal((2, 64, 256))
    yield "clifford product m=8, batch 64", (a, b, sign, index), K.table_product_numpy, K.table_product_numba

    q = SphereQuadrature.build(4, 50_000, seed=1)
    x = random_ball(rng, 16, 4)
    vals = np.sign(q.nodes[:, :1])
    center = np.zeros((16, 1))
    args = (x, q.nodes, q.weights, vals, center)
    yield "poisson moments n=4, 5e4 nodes x 16 pts", args, K.poisson_moments_numpy, K.poisson_moments_numba

    w, s = random_atomic_batch(8, rng, 20_000)
    x = random_ball(rng, 20_000, 8)
    yield "atomic eval+grad n=8, 2e4 functions", (w, s, x), K.atomic_eval_grad_numpy, K.atomic_eval_grad_numba


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args()
    if not K.HAVE_NUMBA:
        print("numba not installed; nothing to compare")
        return
    rng = np.random.default_rng(0)
    print(f"{'kernel':42s} {'numpy [ms]':>11s} {'numba [ms]':>11s} {'speedup':>8s}  max|diff|")
    for name, a, f_np, f_nb in cases(rng):
        r_np, r_nb = f_np(*a), f_nb(*a)
        r_np = r_np if isinstance(r_np, tuple) else (r_np,)
        r_nb = r_nb if isinstance(r_nb, tuple) else (r_nb,)
        diff = max(float(np.max(np.abs(u - v))) for u, v in zip(r_np, r_nb))
        t_np = best_of(lambda: f_np(*a), args.repeat)
        t_nb = best_of(lambda: f_nb(*a), args.repeat)
        print(f"{name:42s} {1e3 * t_np:11.2f} {1e3 * t_nb:11.2f} {t_np / t_nb:7.1f}x  {diff:.1e}")


if __name__ == "__main__":
    main()
