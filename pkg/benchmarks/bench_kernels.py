"""Compare the numba kernels with their numpy twins.

Usage::

    python benchmarks/bench_kernels.py            # per-kernel timings
    python benchmarks/bench_kernels.py --e2e weingarten

``--e2e`` reruns one experiment in two subprocesses, one with
``UPTEST_DISABLE_NUMBA=1``, and reports wall times.
"""

from __future__ import annotations

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from uptest import _accel
from uptest.linalg import haar_unitaries


def _cases():
    rng = np.random.default_rng(0)
    perm = np.array([3, 1, 4, 0, 2, 5], dtype=np.int64)
    vec = rng.standard_normal(4**5) + 1j * rng.standard_normal(4**5)
    maps = np.stack([rng.permutation(vec.size) for _ in range(24)])
    lam = rng.dirichlet(np.ones(64))
    gs = np.ascontiguousarray(haar_unitaries(3, 2000, 1))
    B = rng.standard_normal((9, 9)) + 1j * rng.standard_normal((9, 9))
    return {
        "permutation_gather(n=6, d=4)": ("permutation_gather", (perm, 4)),
        "gather_mean(24 maps, 4^5)": ("gather_mean", (vec, maps)),
        "h_k(d=64, k=8)": ("h_k", (lam, 8)),
        "twirl_accumulate(2000 x d=3, n=2)": ("twirl_accumulate", (gs, B, 2)),
    }


def bench(repeat: int = 5) -> list[tuple[str, float, float | None]]:
    rows = []
    for label, (name, args) in _cases().items():
        np_fn = getattr(_accel, f"{name}_np")
        t_np = min(timeit.repeat(lambda: np_fn(*args), number=1, repeat=repeat))
        t_nb = None
        if _accel.HAVE_NUMBA:
            nb_fn = getattr(_accel, f"{name}_nb")
            nb_fn(*args)  # compile outside the timed region
            t_nb = min(timeit.repeat(lambda: nb_fn(*args), number=1, repeat=repeat))
        rows.append((label, t_np, t_nb))
    return rows


def e2e(experiment: str) -> None:
    for backend, flag in (("numba", ""), ("numpy", "1")):
        env = dict(os.environ, UPTEST_DISABLE_NUMBA=flag)
        code = "import time; from uptest.experiments import run; t=time.perf_counter(); " \
               f"run({experiment!r}, {{}}, seed=7); print(time.perf_counter()-t)"
        out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
        print(f"{experiment:<28} {backend:<6} {float(out.stdout):8.3f} s")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--e2e", metavar="EXPERIMENT")
    args = ap.parse_args()
    if args.e2e:
        e2e(args.e2e)
        return
    print(f"{'kernel':<36} {'numpy':>10} {'numba':>10} {'speedup':>8}")
    for label, t_np, t_nb in bench(args.repeat):
        if t_nb is None:
            print(f"{label:<36} {t_np * 1e3:9.2f}ms {'n/a':>10}")
        else:
            print(f"{label:<36} {t_np * 1e3:9.2f}ms {t_nb * 1e3:9.2f}ms {t_np / t_nb:7.1f}x")


if __name__ == "__main__":
    main()
