"""Time the numba and numpy kernels on the same inputs.

    python benchmarks/bench_kernels.py [--points 4000] [--colors 1000000] [--repeat 3]

The numba functions are called once before timing so JIT compilation is
excluded. Outputs of the two paths are compared before any timing.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from slicechroma import kernels
from slicechroma._accel import NUMBA_IMPORTABLE


def _best(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--points", type=int, default=4000)
    ap.add_argument("--colors", type=int, default=1_000_000)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    if not NUMBA_IMPORTABLE:
        raise SystemExit("numba is not importable; nothing to compare")

    rng = np.random.default_rng(args.seed)
    cloud = rng.uniform(-3, 3, size=(args.points, 4))
    xs, ys = rng.uniform(-50, 50, size=(2, args.colors))
    lo, hi = (1 - 1e-3) ** 2, (1 + 1e-3) ** 2

    cases = {
        "pairs_in_shell": (
            lambda: kernels.pairs_in_shell_numpy(cloud, lo, hi),
            lambda: kernels.pairs_in_shell_numba(cloud, lo, hi),
        ),
        "max_pairwise_distance": (
            lambda: kernels.max_pairwise_distance_numpy(cloud),
            lambda: kernels.max_pairwise_distance_numba(cloud),
        ),
        "isbell_colors": (
            lambda: kernels.isbell_colors_numpy(xs, ys, 0.45),
            lambda: kernels.isbell_colors_numba(xs, ys, 0.45),
        ),
    }
    print(f"{'kernel':<24}{'numpy [s]':>12}{'numba [s]':>12}{'speedup':>10}")
    for name, (f_np, f_nb) in cases.items():
        a, b = f_np(), f_nb()  # also warms the JIT
        if isinstance(a, tuple):
            assert all(np.array_equal(u, v) for u, v in zip(a, b)), name
        else:
            assert np.allclose(a, b, rtol=0, atol=1e-12), name
        t_np, t_nb = _best(f_np, args.repeat), _best(f_nb, args.repeat)
        print(f"{name:<24}{t_np:>12.4f}{t_nb:>12.4f}{t_np / t_nb:>10.1f}x")


if __name__ == "__main__":
    main()
