"""Compare the compiled and numpy Monte-Carlo kernels on a realistic sweep.

Times the per-sample fringe evaluation (the hot loop of every contrast and
sensitivity sweep) for both backends across sample counts, checks they
agree, and reports the speedup.  Run:

    python benchmarks/bench_contrast.py [--samples N] [--repeats K]
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from spinlock import analytic, kernels, montecarlo
from spinlock.lockin import LockInSchedule, phase_kernel
from spinlock.noise import NoiseComponent


def build_inputs(samples: int, tau_arm: float):
    components = [
        NoiseComponent.from_field_pt(540, 50),
        NoiseComponent.from_field_pt(390, 100),
        NoiseComponent.from_slow_drift(40, 2.1),
    ]
    schedule = LockInSchedule(n_pulses=7, tau_arm=tau_arm)
    a, b = phase_kernel(components, schedule)
    theta = montecarlo.sample_thetas(7, 0, 0, samples, len(components))
    alpha = 625.0 * 1.6e-5
    return (
        theta,
        a,
        b,
        0.0,
        analytic.cos_factor(alpha, 50),
        analytic.sin_factor(alpha, 50),
        1.0 / 50,
        float(np.sin(7 * np.pi)),
    )


def time_kernel(fn, args, eq23: bool, repeats: int) -> float:
    fn(*args, eq23)  # warm up
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn(*args, eq23)
        best = min(best, time.perf_counter() - start)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--samples", type=int, default=200_000)
    parser.add_argument("--repeats", type=int, default=7)
    cli = parser.parse_args()

    try:
        compiled = kernels.backend_module("cython").contrast_values
    except ImportError:
        print("compiled kernel not built; run pip install -e . with Cython present")
        return
    fallback = kernels.backend_module("numpy").contrast_values

    print(f"active backend: {kernels.active_backend()}")
    print(f"{'mode':>8} {'samples':>9} {'cython':>12} {'numpy':>12} {'speedup':>8}  max|diff|")
    for samples in (10_000, cli.samples):
        args = build_inputs(samples, 5e-3)
        for eq23 in (False, True):
            t_c = time_kernel(compiled, args, eq23, cli.repeats)
            t_n = time_kernel(fallback, args, eq23, cli.repeats)
            diff = float(
                np.abs(
                    np.asarray(compiled(*args, eq23)) - fallback(*args, eq23)
                ).max()
            )
            mode = "eq23" if eq23 else "ramsey"
            print(
                f"{mode:>8} {samples:>9} {t_c * 1e3:>10.3f}ms {t_n * 1e3:>10.3f}ms"
                f" {t_n / t_c:>7.2f}x  {diff:.2e}"
            )


if __name__ == "__main__":
    main()
