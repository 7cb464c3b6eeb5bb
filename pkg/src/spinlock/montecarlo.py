"""Monte-Carlo fringe contrast, measurement range, and sensitivity sweeps.

Reproducibility contract: every result is a pure function of (config,
master_seed), independent of worker count and evaluation order.  Tone
phases come from counter-based Philox streams keyed by (master_seed,
point_index); each sample owns a fixed, precomputed slice of the counter
sequence, so any scheduling of the work reproduces identical draws, and
the reduction always sums an index-ordered buffer.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from . import analytic, kernels
from .dicke import PhaseTriple
from .errors import ConfigError, EmptyRangeError
from .lockin import LockInSchedule, phase_kernel
from .noise import NoiseComponent

INTEGRANDS = ("ramsey", "eq23")
_TWO_PI = 2.0 * math.pi
_DOUBLE_SCALE = 2.0**-53
_RAWS_PER_BLOCK = 4  # Philox-4x64 emits four 64-bit words per counter step
MAX_SEED = 2**64


@dataclass(frozen=True)
class McConfig:
    """Sampling and physics knobs of one Monte-Carlo estimate.

    The twisting phase entering the fringe formulas is
    alpha = chi * squeeze_duration.
    """

    samples: int
    master_seed: int
    n_atoms: int
    n_photons: int
    chi: float
    squeeze_duration: float

    def __post_init__(self):
        if not isinstance(self.samples, (int, np.integer)) or self.samples < 1:
            raise ConfigError(f"samples must be a positive integer, got {self.samples!r}")
        if (
            not isinstance(self.master_seed, (int, np.integer))
            or not 0 <= self.master_seed < MAX_SEED
        ):
            raise ConfigError(
                f"master_seed must be an integer in [0, 2^64), got {self.master_seed!r}"
            )
        for name in ("n_atoms", "n_photons"):
            value = getattr(self, name)
            if not isinstance(value, (int, np.integer)) or value < 1:
                raise ConfigError(f"{name} must be a positive integer, got {value!r}")
        for name in ("chi", "squeeze_duration"):
            value = getattr(self, name)
            if not np.isfinite(value) or value < 0:
                raise ConfigError(f"{name} must be finite and >= 0, got {value!r}")

    @property
    def alpha(self) -> float:
        return self.chi * self.squeeze_duration


@dataclass(frozen=True)
class CurvePoint:
    """One sweep point: abscissa in ms, estimate, and its standard error."""

    x: float
    estimate: float
    stderr: float

    def __post_init__(self):
        if not self.stderr >= 0:
            raise ConfigError(f"stderr must be >= 0, got {self.stderr!r}")


def sample_thetas(
    master_seed: int, point_index: int, start: int, count: int, n_tones: int
) -> np.ndarray:
    """Uniform [0, 2pi) phases, shape (count, n_tones), for samples
    start..start+count of the stream keyed by (master_seed, point_index).

    Each sample consumes a fixed number of whole Philox counter blocks
    (ceil(n_tones/4)), so the draws for sample j never depend on how many
    samples were generated before it or in which batch; advance() jumps
    straight to the requested offset.
    """
    blocks_per_sample = max(1, -(-n_tones // _RAWS_PER_BLOCK))
    bitgen = np.random.Philox(seed=np.random.SeedSequence((master_seed, point_index)))
    if start:
        bitgen.advance(start * blocks_per_sample)
    raw = bitgen.random_raw(count * blocks_per_sample * _RAWS_PER_BLOCK)
    raw = raw.reshape(count, blocks_per_sample * _RAWS_PER_BLOCK)[:, :n_tones]
    # top 53 bits of each word -> double in [0, 1), scaled to [0, 2pi)
    return (raw >> np.uint64(11)) * (_TWO_PI * _DOUBLE_SCALE)


def _split_fixed(
    components: Sequence[NoiseComponent], a: np.ndarray, b: np.ndarray
) -> tuple[float, np.ndarray, np.ndarray]:
    """Fold pinned-phase tones into a constant offset; keep random ones."""
    beta0 = 0.0
    free: list[int] = []
    for k, comp in enumerate(components):
        if comp.phase is None:
            free.append(k)
        else:
            beta0 += a[k] * math.sin(comp.phase) + b[k] * math.cos(comp.phase)
    idx = np.array(free, dtype=int)
    return beta0, np.ascontiguousarray(a[idx]), np.ascontiguousarray(b[idx])


def _point_values(
    components: Sequence[NoiseComponent],
    schedule: LockInSchedule,
    mc: McConfig,
    integrand: str,
    toggle: bool,
    point_index: int,
    kernel=None,
) -> np.ndarray:
    if integrand not in INTEGRANDS:
        raise ConfigError(
            f"unknown integrand {integrand!r}; expected one of {INTEGRANDS}"
        )
    kernel = kernel or kernels.contrast_values
    a, b = phase_kernel(components, schedule, toggle)
    beta0, a_free, b_free = _split_fixed(components, a, b)
    theta = sample_thetas(
        mc.master_seed, point_index, 0, mc.samples, a_free.size
    )
    cos_fac = analytic.cos_factor(mc.alpha, mc.n_atoms)
    sin_fac = analytic.sin_factor(mc.alpha, mc.n_atoms)
    # the bracketing drive is the N pi pulses acting about x
    gamma = schedule.n_pulses * math.pi
    return np.asarray(
        kernel(
            theta,
            a_free,
            b_free,
            beta0,
            cos_fac,
            sin_fac,
            1.0 / mc.n_atoms,
            math.sin(gamma),
            integrand == "eq23",
        )
    )


def fringe_contrast_mc(
    components: Sequence[NoiseComponent],
    schedule: LockInSchedule,
    mc: McConfig,
    *,
    integrand: str = "ramsey",
    toggle: bool = True,
    point_index: int = 0,
    x_value: float | None = None,
) -> CurvePoint:
    """Monte-Carlo fringe contrast E[cos(detected phase)] with stderr.

    The estimate is the mean of per-sample fringe values over iid uniform
    tone phases; stderr is sample-std/sqrt(samples) (0 for a single
    sample).  Deterministic given (mc, point_index).
    """
    values = _point_values(components, schedule, mc, integrand, toggle, point_index)
    estimate = float(np.mean(values))
    if mc.samples > 1 and np.ptp(values) != 0.0:
        stderr = float(np.std(values, ddof=1) / math.sqrt(mc.samples))
    else:
        # a constant sample (all phases pinned, or no noise at all) has zero
        # spread; np.std would report ~1e-16 from the rounding of the mean
        stderr = 0.0
    x = schedule.tau_arm * 1e3 if x_value is None else x_value
    return CurvePoint(x=x, estimate=estimate, stderr=stderr)


def _run_indexed(tasks, threads: int):
    """Evaluate index-keyed closures into a list, any scheduling, fixed order."""
    results = [None] * len(tasks)
    if threads <= 1:
        for i, task in enumerate(tasks):
            results[i] = task()
        return results
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = {pool.submit(task): i for i, task in enumerate(tasks)}
        for future, i in futures.items():
            results[i] = future.result()
    return results


def contrast_curve(
    components: Sequence[NoiseComponent],
    n_pulses: int,
    tau_arm_grid_s: Sequence[float],
    mc: McConfig,
    *,
    integrand: str = "ramsey",
    toggle: bool = True,
    threads: int = 1,
) -> list[CurvePoint]:
    """Fringe contrast versus arm time; x reported in ms.

    Grid point i uses the phase stream keyed by point_index=i, so the curve
    is reproducible point-by-point regardless of grid slicing or threads.
    """
    grid = [float(t) for t in tau_arm_grid_s]
    if not grid:
        raise ConfigError("tau_arm grid must be nonempty")

    def make_task(i: int, tau: float):
        def task() -> CurvePoint:
            schedule = LockInSchedule(n_pulses=n_pulses, tau_arm=tau)
            return fringe_contrast_mc(
                components,
                schedule,
                mc,
                integrand=integrand,
                toggle=toggle,
                point_index=i,
                x_value=tau * 1e3,
            )

        return task

    tasks = [make_task(i, tau) for i, tau in enumerate(grid)]
    return _run_indexed(tasks, threads)


def measurement_range(
    curve: Sequence[CurvePoint], threshold: float = 0.9
) -> tuple[float, float]:
    """Widest contiguous x-interval where the estimate stays >= threshold.

    Returns (x_low, x_high) in the curve's units (ms); ties go to the
    earliest run.  Raises EmptyRangeError when no point qualifies.
    """
    if not curve:
        raise ConfigError("measurement_range needs a nonempty curve")
    if not 0.0 < threshold < 1.0:
        raise ConfigError(f"threshold must be in (0, 1), got {threshold!r}")
    best: tuple[float, float] | None = None
    best_span = -1.0
    run_start: int | None = None
    points = list(curve)
    for i, point in enumerate(points + [CurvePoint(0.0, -math.inf, 0.0)]):
        if i < len(points) and point.estimate >= threshold:
            if run_start is None:
                run_start = i
            continue
        if run_start is not None:
            span = points[i - 1].x - points[run_start].x
            if span > best_span:
                best_span = span
                best = (points[run_start].x, points[i - 1].x)
            run_start = None
    if best is None:
        raise EmptyRangeError(
            f"no contiguous run of contrast >= {threshold} on the grid"
        )
    return best


def sensitivity_point(
    contrast: CurvePoint,
    mc: McConfig,
    n_pulses: int,
    tau_arm: float,
) -> CurvePoint:
    """Field sensitivity for one interrogation window, Hz per sqrt(Hz).

    S = dphi_eff / (2 pi T_coh) * sqrt(T_cycle) with
    dphi_eff = dphi(alpha, 0, 0) / contrast, T_coh = N tau_arm (phase
    actually accumulates for N arms), and T_cycle = squeeze_duration +
    (N+1) tau_arm (pi and pi/2 pulses treated as instantaneous).  A
    nonpositive contrast means no fringe: infinite sensitivity.
    """
    dphi0 = analytic.min_detectable_phase(
        PhaseTriple(mc.alpha, 0.0, 0.0), mc.n_atoms
    )
    t_coh = n_pulses * tau_arm
    t_cycle = mc.squeeze_duration + (n_pulses + 1) * tau_arm
    scale = dphi0 * math.sqrt(t_cycle) / (_TWO_PI * t_coh)
    if contrast.estimate <= 0.0:
        return CurvePoint(x=contrast.x, estimate=math.inf, stderr=math.inf)
    estimate = scale / contrast.estimate
    stderr = estimate * contrast.stderr / contrast.estimate
    return CurvePoint(x=contrast.x, estimate=estimate, stderr=stderr)


def sensitivity_curve(
    components: Sequence[NoiseComponent],
    n_atoms_list: Sequence[int],
    duration_grid_s: Sequence[float],
    n_pulses: int,
    mc: McConfig,
    *,
    integrand: str = "ramsey",
    toggle: bool = True,
    threads: int = 1,
) -> dict[int, list[CurvePoint]]:
    """Sensitivity versus total interrogation window T, one curve per atom
    number; x reported in ms.

    T on the grid is the full window (N+1) tau_arm.  The phase stream for a
    given T is keyed by its grid index only, shared across atom numbers, so
    curves for different N_a differ by physics and not by sampling noise.
    """
    grid = [float(t) for t in duration_grid_s]
    atoms = [int(n) for n in n_atoms_list]
    if not grid:
        raise ConfigError("duration grid must be nonempty")
    if not atoms:
        raise ConfigError("n_atoms list must be nonempty")

    def make_task(n_atoms: int, t_index: int, duration: float):
        def task() -> CurvePoint:
            tau_arm = duration / (n_pulses + 1)
            schedule = LockInSchedule(n_pulses=n_pulses, tau_arm=tau_arm)
            mc_n = replace(mc, n_atoms=n_atoms)
            contrast = fringe_contrast_mc(
                components,
                schedule,
                mc_n,
                integrand=integrand,
                toggle=toggle,
                point_index=t_index,
                x_value=duration * 1e3,
            )
            return sensitivity_point(contrast, mc_n, n_pulses, tau_arm)

        return task

    tasks = [
        make_task(n, i, t) for n in atoms for i, t in enumerate(grid)
    ]
    flat = _run_indexed(tasks, threads)
    return {
        n: flat[j * len(grid) : (j + 1) * len(grid)] for j, n in enumerate(atoms)
    }
