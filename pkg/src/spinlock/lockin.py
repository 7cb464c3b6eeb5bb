"""Pulse-train scheduling and noise-phase accumulation.

A lock-in interrogation bracketed by pi/2 pulses contains N equally spaced
pi pulses; the spin's sensitivity to the field between pulses is the +/-1
toggling square wave s(t), flipping at every pi pulse.  The accumulated
phase is beta = integral of 2 pi N(t) s(t) dt over the window, evaluated in
closed form per tone per inter-pulse interval (a sum of sine differences,
no quadrature).  The square wave demodulates: a tone at f = 1/(2 tau_arm)
adds coherently across intervals, a tone at f = 1/tau_arm cancels.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConfigError, WindowError
from .noise import NoiseComponent, check_phase_count


@dataclass(frozen=True)
class LockInSchedule:
    """N pi pulses spaced tau_arm apart, optionally bracketed by pi/2 pulses.

    The interrogation window is (N+1) * tau_arm: one arm before the first
    pulse, one after the last.
    """

    n_pulses: int
    tau_arm: float
    bracket: bool = True

    def __post_init__(self):
        if not isinstance(self.n_pulses, (int, np.integer)) or isinstance(
            self.n_pulses, bool
        ):
            raise ConfigError(f"n_pulses must be an integer, got {self.n_pulses!r}")
        if self.n_pulses < 1:
            raise ConfigError(f"n_pulses must be >= 1, got {self.n_pulses}")
        if not np.isfinite(self.tau_arm) or self.tau_arm <= 0:
            raise ConfigError(f"tau_arm must be > 0 seconds, got {self.tau_arm!r}")

    @property
    def total_duration(self) -> float:
        return (self.n_pulses + 1) * self.tau_arm

    @property
    def pulse_times(self) -> np.ndarray:
        """Times of the N pi pulses: m * tau_arm for m = 1..N."""
        return self.tau_arm * np.arange(1, self.n_pulses + 1, dtype=float)

    @property
    def boundaries(self) -> np.ndarray:
        """Interval edges 0, tau_arm, ..., (N+1) tau_arm (N+2 values)."""
        return self.tau_arm * np.arange(self.n_pulses + 2, dtype=float)


def toggling_function(schedule: LockInSchedule, t: float) -> int:
    """Sign of the field coupling at time t: +1 before the first pi pulse,
    flipping at each pulse time (the flip counts as already applied at t
    equal to the pulse time)."""
    if not 0.0 <= t <= schedule.total_duration:
        raise WindowError(
            f"t={t!r} outside interrogation window [0, {schedule.total_duration!r}]"
        )
    m = min(int(math.floor(t / schedule.tau_arm)), schedule.n_pulses)
    return 1 if m % 2 == 0 else -1


def interval_signs(schedule: LockInSchedule, toggle: bool = True) -> np.ndarray:
    """s(t) on each of the N+1 inter-pulse intervals: +1, -1, +1, ..."""
    if not toggle:
        return np.ones(schedule.n_pulses + 1)
    return (-1.0) ** np.arange(schedule.n_pulses + 1)


def phase_kernel(
    components: Sequence[NoiseComponent],
    schedule: LockInSchedule,
    toggle: bool = True,
) -> tuple[np.ndarray, np.ndarray]:
    """Per-tone coefficients (a, b) such that
    beta = sum_k a_k sin(theta_k) + b_k cos(theta_k).

    For tone k the exact interval integral gives
    (A_k/f_k) sum_i s_i [sin(theta_k + x_{i+1}) - sin(theta_k + x_i)]
    with x_i = 2 pi f_k t_i at the interval edges; expanding the sine
    separates the theta dependence into these two schedule-only
    coefficients, which is what makes the Monte-Carlo hot loop a dot
    product instead of a time integral.
    """
    signs = interval_signs(schedule, toggle)
    edges = schedule.boundaries
    q = len(components)
    a = np.zeros(q)
    b = np.zeros(q)
    for k, comp in enumerate(components):
        weight = comp.amplitude_hz / comp.freq_hz
        x = 2.0 * np.pi * comp.freq_hz * edges
        a[k] = weight * np.dot(signs, np.diff(np.cos(x)))
        b[k] = weight * np.dot(signs, np.diff(np.sin(x)))
    return a, b


def accumulated_beta(
    components: Sequence[NoiseComponent],
    theta: Sequence[float],
    schedule: LockInSchedule,
    toggle: bool = True,
) -> float:
    """Accumulated phase beta = integral 2 pi N(t) s(t) dt in radians,
    closed form.  With toggle False, s = 1 and this is the plain definite
    integral of the noise over the window.

    Exactly linear in each tone amplitude.
    """
    check_phase_count(components, theta)
    if not components:
        return 0.0
    a, b = phase_kernel(components, schedule, toggle)
    theta_arr = np.asarray(theta, dtype=float)
    return float(np.dot(np.sin(theta_arr), a) + np.dot(np.cos(theta_arr), b))
