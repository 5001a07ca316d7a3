"""Benchmark the numba kernels against the pure-numpy fallback.

Runs the two hot paths (propagator stepping and the instantaneous
eigensystem grid scan) on the four-level system at E*T = 10 and reports
wall times, the speedup, and the numerical agreement between backends.

Usage:  python benchmarks/bench_backends.py [--steps N] [--repeats R]
"""

import argparse
import time

import numpy as np

from circulant_qft import _kernels
from circulant_qft.models import build_four_level
from circulant_qft.schedule import SechMaskedPair


def time_call(fn, repeats):
    best = np.inf
    result = None
    for _ in range(repeats):
        start = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - start)
    return best, result


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--steps", type=int, default=4000)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    energy = 10.0
    h0, h1 = build_four_level(energy, energy * (1 + 1j / 3))
    pulses = SechMaskedPair(T=1.0, tau=1.0)
    dt = 12.0 / args.steps
    t_mid = -6.0 + dt * (np.arange(args.steps) + 0.5)
    f, g = pulses.values(t_mid)
    samples = np.arange(0, args.steps + 1, max(1, args.steps // 50),
                        dtype=np.int64)

    print(f"propagator stepping, {args.steps} steps, best of {args.repeats}")
    t_np, (_, u_np, _) = time_call(
        lambda: _kernels.propagate_numpy(h0, h1, f, g, dt, samples),
        args.repeats,
    )
    print(f"  numpy: {t_np * 1e3:8.2f} ms")
    if _kernels.HAS_NUMBA:
        _kernels.warmup()
        t_nb, (_, u_nb, _) = time_call(
            lambda: _kernels.propagate_numba(h0, h1, f, g, dt, samples),
            args.repeats,
        )
        print(f"  numba: {t_nb * 1e3:8.2f} ms   "
              f"speedup {t_np / t_nb:5.2f}x   "
              f"max |dU| {np.abs(u_np - u_nb).max():.2e}")
    else:
        print("  numba: not importable")

    grid = np.linspace(-6.0, 6.0, args.steps + 1)
    fg, gg = pulses.values(grid)
    print(f"eigensystem grid scan, {args.steps + 1} points")
    t_np, (w_np, _) = time_call(
        lambda: _kernels.eigh_grid_numpy(h0, h1, fg, gg), args.repeats
    )
    print(f"  numpy: {t_np * 1e3:8.2f} ms")
    if _kernels.HAS_NUMBA:
        t_nb, (w_nb, _) = time_call(
            lambda: _kernels.eigh_grid_numba(h0, h1, fg, gg), args.repeats
        )
        print(f"  numba: {t_nb * 1e3:8.2f} ms   "
              f"speedup {t_np / t_nb:5.2f}x   "
              f"max |dw| {np.abs(w_np - w_nb).max():.2e}")


if __name__ == "__main__":
    main()
