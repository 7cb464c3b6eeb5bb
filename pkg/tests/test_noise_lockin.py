import math

import numpy as np
import pytest
from scipy.integrate import quad

from spinlock import lockin
from spinlock.errors import ConfigError, DimensionMismatchError, WindowError
from spinlock.lockin import LockInSchedule
from spinlock.noise import NoiseComponent, resolve_phases, synth_noise


def test_component_validation():
    with pytest.raises(ConfigError):
        NoiseComponent(-1.0, 50.0)
    with pytest.raises(ConfigError):
        NoiseComponent(1.0, 0.0)
    with pytest.raises(ConfigError):
        NoiseComponent(1.0, 50.0, phase=math.inf)


def test_field_conversion():
    assert NoiseComponent.from_field_pt(540, 50).amplitude_hz == pytest.approx(
        15.12, rel=1e-12
    )
    assert NoiseComponent.from_field_pt(390, 100).amplitude_hz == pytest.approx(
        10.92, rel=1e-12
    )
    custom = NoiseComponent.from_field_pt(1000, 50, gyro_hz_per_nt=10.0)
    assert custom.amplitude_hz == pytest.approx(10.0, rel=1e-12)


def test_slow_drift_conversion():
    assert NoiseComponent.from_slow_drift(40, 2.1).amplitude_hz == pytest.approx(
        40 / 2.1, rel=1e-12
    )


def test_synth_noise_values():
    assert synth_noise([], [], 0.5) == 0.0
    tone = NoiseComponent(15.12, 50.0)
    assert synth_noise([tone], [0.0], 0.0) == pytest.approx(15.12, rel=1e-12)
    assert synth_noise([tone], [0.0], 1 / 100) == pytest.approx(-15.12, rel=1e-12)
    times = np.linspace(0, 0.1, 7)
    values = synth_noise([tone], [0.3], times)
    assert values.shape == times.shape
    with pytest.raises(DimensionMismatchError):
        synth_noise([tone], [0.0, 0.1], 0.0)


def test_resolve_phases():
    comps = [NoiseComponent(1.0, 50.0, phase=1.25), NoiseComponent(1.0, 60.0)]
    rng = np.random.default_rng(0)
    theta = resolve_phases(comps, rng)
    assert theta[0] == 1.25
    assert 0 <= theta[1] < 2 * math.pi


def test_schedule_validation_and_layout():
    with pytest.raises(ConfigError):
        LockInSchedule(0, 1e-3)
    with pytest.raises(ConfigError):
        LockInSchedule(3, 0.0)
    sched = LockInSchedule(7, 0.005)
    assert sched.total_duration == pytest.approx(0.04, rel=1e-15)
    assert np.all(np.diff(sched.pulse_times) > 0)
    assert len(sched.pulse_times) == 7
    assert len(sched.boundaries) == 9


def test_toggling_sign_pattern():
    sched = LockInSchedule(7, 0.005)
    assert lockin.toggling_function(sched, 0.0049) == 1
    assert lockin.toggling_function(sched, 0.0051) == -1
    assert lockin.toggling_function(sched, sched.total_duration - 1e-6) == -1
    with pytest.raises(WindowError):
        lockin.toggling_function(sched, -1e-9)
    with pytest.raises(WindowError):
        lockin.toggling_function(sched, sched.total_duration + 1e-9)


def test_toggling_has_exactly_n_flips():
    sched = LockInSchedule(5, 1e-3)
    midpoints = (sched.boundaries[:-1] + sched.boundaries[1:]) / 2
    signs = [lockin.toggling_function(sched, t) for t in midpoints]
    flips = sum(a != b for a, b in zip(signs, signs[1:]))
    assert flips == 5
    assert signs == list(lockin.interval_signs(sched))


def test_beta_zero_for_zero_amplitude():
    comps = [NoiseComponent(0.0, 50.0), NoiseComponent(0.0, 3.0)]
    sched = LockInSchedule(3, 2e-3)
    assert lockin.accumulated_beta(comps, [0.1, 0.2], sched) == 0.0
    assert lockin.accumulated_beta([], [], sched) == 0.0


def test_beta_matches_quadrature():
    rng = np.random.default_rng(42)
    worst = 0.0
    for _ in range(15):
        q = int(rng.integers(1, 4))
        comps = [
            NoiseComponent(float(rng.uniform(0.5, 20)), float(rng.uniform(0.5, 200)))
            for _ in range(q)
        ]
        theta = rng.uniform(0, 2 * math.pi, q)
        sched = LockInSchedule(
            int(rng.integers(1, 9)), float(rng.uniform(1e-3, 2e-2))
        )
        for toggle in (True, False):
            closed = lockin.accumulated_beta(comps, theta, sched, toggle)
            total = 0.0
            for i, sign in enumerate(lockin.interval_signs(sched, toggle)):
                part, _ = quad(
                    lambda t: 2 * math.pi * synth_noise(comps, theta, t) * sign,
                    sched.boundaries[i],
                    sched.boundaries[i + 1],
                    limit=200,
                )
                total += part
            worst = max(worst, abs(closed - total))
    assert worst < 1e-8, f"worst quadrature mismatch {worst}"


def test_lockin_resonance_and_suppression():
    sched = LockInSchedule(7, 0.005)
    resonant = NoiseComponent(1.0, 1 / (2 * sched.tau_arm))
    cancelled = NoiseComponent(1.0, 1 / sched.tau_arm)
    thetas = np.linspace(0, 2 * math.pi, 65)
    beta_res = max(
        abs(lockin.accumulated_beta([resonant], [t], sched)) for t in thetas
    )
    beta_sup = max(
        abs(lockin.accumulated_beta([cancelled], [t], sched)) for t in thetas
    )
    # coherent accumulation: |beta| = (A/f) * 2 * (N+1) at quadrature
    assert beta_res == pytest.approx(
        resonant.amplitude_hz / resonant.freq_hz * 2 * 8, rel=1e-3
    )
    assert beta_sup < 1e-12


def test_slow_drift_is_demodulated_away():
    sched = LockInSchedule(7, 0.005)
    slow = NoiseComponent.from_slow_drift(40, 2.1)
    toggled = max(
        abs(lockin.accumulated_beta([slow], [t], sched))
        for t in np.linspace(0, 2 * math.pi, 33)
    )
    plain = max(
        abs(lockin.accumulated_beta([slow], [t], sched, toggle=False))
        for t in np.linspace(0, 2 * math.pi, 33)
    )
    assert toggled < plain / 10


def test_beta_is_linear_in_amplitude():
    sched = LockInSchedule(4, 3e-3)
    small = lockin.accumulated_beta([NoiseComponent(2.0, 50.0)], [1.1], sched)
    large = lockin.accumulated_beta([NoiseComponent(6.0, 50.0)], [1.1], sched)
    assert large == pytest.approx(3 * small, rel=1e-14)


def test_no_toggle_is_definite_window_integral():
    sched = LockInSchedule(7, 0.005)
    tone = NoiseComponent(3.0, 17.0)
    theta = 0.77
    expected = (
        3.0
        / 17.0
        * (
            math.sin(theta + 2 * math.pi * 17.0 * sched.total_duration)
            - math.sin(theta)
        )
    )
    value = lockin.accumulated_beta([tone], [theta], sched, toggle=False)
    assert value == pytest.approx(expected, abs=1e-14)


def test_phase_kernel_reproduces_beta():
    comps = [NoiseComponent(5.0, 50.0), NoiseComponent(2.0, 130.0)]
    sched = LockInSchedule(6, 4e-3)
    a, b = lockin.phase_kernel(comps, sched)
    rng = np.random.default_rng(9)
    for _ in range(20):
        theta = rng.uniform(0, 2 * math.pi, 2)
        direct = lockin.accumulated_beta(comps, theta, sched)
        via_kernel = float(np.sin(theta) @ a + np.cos(theta) @ b)
        assert via_kernel == pytest.approx(direct, abs=1e-12)
