"""Compiled sampling kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5]

Times each kernel on the same inputs, checks the outputs agree, then
times a full midpoint convexity test under both backends (each in a
fresh interpreter, since the backend is chosen at import).
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from pwcvx.sampling import KERNEL_BACKEND, _kernels_py

END_TO_END = """
import time
from pwcvx import builtin
from pwcvx.sampling import KERNEL_BACKEND, SampleConfig, midpoint_convexity_test
cfg = SampleConfig(n_samples=200_000, seed=1)
t = time.perf_counter()
midpoint_convexity_test(builtin("abs-x-2d"), cfg)
print(KERNEL_BACKEND, time.perf_counter() - t)
"""


def _inputs(rng, k=200_000):
    A = np.ascontiguousarray(rng.normal(size=(6, 2)))
    b = rng.uniform(0.5, 2.0, size=6)
    E = np.zeros((0, 2))
    e = np.zeros(0)
    X = np.ascontiguousarray(rng.uniform(-4, 4, size=(k, 2)))
    Q = np.array([[2.0, 0.5], [0.5, 1.0]])
    c = np.array([1.0, -1.0])
    fx, fy, fz = rng.normal(size=(3, k))
    return (A, b, E, e, X, 1e-12), (Q, c, 0.25, X), (fx, fy, fz, 0.5, 1e-7)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if KERNEL_BACKEND != "cython":
        sys.exit("compiled kernels are not built; run `pip install -e . --no-build-isolation` first")
    from pwcvx.sampling import _kernels

    mask_args, quad_args, viol_args = _inputs(np.random.default_rng(0))
    print(f"{'kernel':20s} {'cython ms':>10s} {'numpy ms':>10s} {'speedup':>8s}")
    for name, a in (("polyhedron_mask", mask_args), ("quadratic_values", quad_args), ("violation_indices", viol_args)):
        fast, slow = getattr(_kernels, name), getattr(_kernels_py, name)
        assert np.allclose(np.asarray(fast(*a), dtype=float), np.asarray(slow(*a), dtype=float))
        tf = min(timeit.repeat(lambda: fast(*a), number=1, repeat=args.repeat)) * 1e3
        ts = min(timeit.repeat(lambda: slow(*a), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:20s} {tf:10.2f} {ts:10.2f} {ts / tf:8.2f}x")

    print("\nmidpoint test, abs-x-2d, 200k pairs")
    for pure in ("", "1"):
        env = dict(os.environ, PWCVX_PURE_PYTHON=pure)
        if not pure:
            env.pop("PWCVX_PURE_PYTHON")
        out = subprocess.run([sys.executable, "-c", END_TO_END], env=env, capture_output=True, text=True, check=True)
        backend, secs = out.stdout.split()
        print(f"  {backend:8s} {float(secs):.3f}s")


if __name__ == "__main__":
    main()
