"""Compare the compiled and pure-numpy kernels, and time a small sweep under each.

Usage::

    python benchmarks/bench_kernels.py [--repeat 5] [--sweep]
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from airesample._ext import fallback

try:
    from airesample._ext import _kernels as compiled
except ImportError:
    compiled = None


def best_time(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def kernel_cases(rng):
    cell = rng.normal(size=(800, 4))
    train = rng.normal(size=(1700, 4))
    query = rng.normal(size=(830, 4))
    X = rng.normal(size=(1700, 4))
    y = (X[:, 0] + rng.normal(size=1700) > 0).astype(float)
    return [
        ("knn self k=5 (800 rows)", lambda m: m.knn_indices(cell, cell, 5, True)),
        ("knn query k=15 (830 x 1700)", lambda m: m.knn_indices(train, query, 15)),
        ("best_split (1700 x 4)", lambda m: m.best_split(X, y, range(4))),
    ]


SWEEP_SNIPPET = """
import time
from airesample import _ext
from airesample.harness.config import ExperimentConfig
from airesample.harness.runner import run_sweep
from airesample.synthgen import generate_pool, paper_pool_config
d = generate_pool(paper_pool_config(2501, seed=1, mc_draws=5000))
cfg = ExperimentConfig(classifiers=("KNN", "DECISION_TREE"), tune=False, master_seed=1)
t0 = time.perf_counter()
run_sweep(d, cfg)
print(_ext.BACKEND, time.perf_counter() - t0)
"""


def time_sweep(pure):
    env = dict(os.environ, AIRESAMPLE_PURE_PYTHON="1" if pure else "0")
    out = subprocess.run([sys.executable, "-c", SWEEP_SNIPPET], env=env, capture_output=True, text=True, check=True)
    backend, seconds = out.stdout.split()
    return backend, float(seconds)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--sweep", action="store_true", help="also time a KNN + tree sweep per backend")
    args = parser.parse_args(argv)

    if compiled is None:
        print("compiled kernels are not built; run `python setup.py build_ext --inplace`")
        return 1
    rng = np.random.default_rng(0)
    print(f"{'kernel':32s} {'numpy':>10s} {'cython':>10s} {'speedup':>8s}")
    for name, call in kernel_cases(rng):
        assert np.array_equal(np.asarray(call(fallback), dtype=object), np.asarray(call(compiled), dtype=object))
        t_py = best_time(lambda: call(fallback), args.repeat)
        t_cy = best_time(lambda: call(compiled), args.repeat)
        print(f"{name:32s} {t_py * 1e3:8.2f}ms {t_cy * 1e3:8.2f}ms {t_py / t_cy:7.1f}x")
    if args.sweep:
        for pure in (True, False):
            backend, seconds = time_sweep(pure)
            print(f"sweep (KNN + DECISION_TREE, 126 cells) on {backend:6s}: {seconds:.2f}s")
    return 0


if __name__ == "__main__":
    sys.exit(main())
