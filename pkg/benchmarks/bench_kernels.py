"""Compare the numba kernels with their numpy/LAPACK counterparts.

    python3 benchmarks/bench_kernels.py [--repeat 20]

Both paths are timed in one process regardless of SYMBATH_NUMBA; the first
call of each compiled kernel is made before timing so JIT cost is excluded.
"""

import argparse
import time

import numpy as np

from symbath import dynamics, kernels
from symbath._accel import HAVE_NUMBA
from symbath.algebra import random_hermitian, vec
from symbath.generator import EnvironmentParams, build_generator


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases(rng):
    gen = dynamics.vectorize(build_generator(EnvironmentParams(1.0, 0.5, 1.0), 3)).matrix
    step = kernels.expm_numpy(0.01 * gen.conj().T)
    v0 = vec(random_hermitian(8, rng))
    for n in (8, 16, 64):
        h = random_hermitian(n, rng)
        yield f"eigh n={n}", lambda h=h: kernels.eigh_numba(h), lambda h=h: kernels.eigh_numpy(h)
    for name, m in (("expm 2q", 0.5 * gen[:16, :16]), ("expm 3q", 0.5 * gen)):
        yield name, lambda m=m: kernels.expm_numba(m), lambda m=m: kernels.expm_numpy(m)
    yield (
        "trapezoid 3q x2000",
        lambda: kernels.trapezoid_orbit_numba(step, v0, 2000),
        lambda: kernels.trapezoid_orbit_numpy(step, v0, 2000),
    )


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=20)
    args = parser.parse_args()
    if not HAVE_NUMBA:
        print("numba not importable: both columns time the numpy path")
    rng = np.random.default_rng(0)
    print(f"{'kernel':<22}{'numba [ms]':>12}{'numpy [ms]':>12}{'ratio':>8}")
    for name, fast, ref in cases(rng):
        fast()  # compile
        t_fast = best_of(fast, args.repeat)
        t_ref = best_of(ref, args.repeat)
        print(f"{name:<22}{1e3 * t_fast:12.3f}{1e3 * t_ref:12.3f}{t_ref / t_fast:8.2f}")


if __name__ == "__main__":
    main()
