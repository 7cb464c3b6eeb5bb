import math

import numpy as np
import pytest

from spinlock import kernels, montecarlo as mc
from spinlock.errors import ConfigError, EmptyRangeError
from spinlock.lockin import LockInSchedule
from spinlock.montecarlo import CurvePoint, McConfig
from spinlock.noise import NoiseComponent


def test_mcconfig_validation():
    good = dict(
        samples=10, master_seed=1, n_atoms=2, n_photons=2, chi=1.0, squeeze_duration=0.0
    )
    McConfig(**good)
    for key, bad in (
        ("samples", 0),
        ("master_seed", -1),
        ("master_seed", 2**64),
        ("n_atoms", 0),
        ("chi", -1.0),
        ("squeeze_duration", math.nan),
    ):
        with pytest.raises(ConfigError):
            McConfig(**{**good, key: bad})


def test_alpha_is_chi_times_duration():
    cfg = McConfig(
        samples=1, master_seed=0, n_atoms=5, n_photons=5, chi=625.0,
        squeeze_duration=1.6e-5,
    )
    assert cfg.alpha == pytest.approx(0.01, rel=1e-12)


def test_curvepoint_rejects_negative_stderr():
    with pytest.raises(ConfigError):
        CurvePoint(1.0, 0.5, -1e-3)


def test_sampling_is_chunk_stable():
    full = mc.sample_thetas(12345, 3, 0, 100, 5)
    split = np.vstack(
        [
            mc.sample_thetas(12345, 3, 0, 17, 5),
            mc.sample_thetas(12345, 3, 17, 33, 5),
            mc.sample_thetas(12345, 3, 50, 50, 5),
        ]
    )
    assert np.array_equal(full, split)


def test_sampling_range_and_independence():
    draws = mc.sample_thetas(1, 0, 0, 2000, 3)
    assert draws.min() >= 0.0
    assert draws.max() < 2 * math.pi
    other_point = mc.sample_thetas(1, 1, 0, 2000, 3)
    assert not np.array_equal(draws, other_point)
    other_seed = mc.sample_thetas(2, 0, 0, 2000, 3)
    assert not np.array_equal(draws, other_seed)
    # n_tones wider than one counter block still chunk-stable
    wide = mc.sample_thetas(1, 0, 2, 4, 9)
    bulk = mc.sample_thetas(1, 0, 0, 6, 9)
    assert np.array_equal(wide, bulk[2:])


def test_sampling_with_zero_tones():
    draws = mc.sample_thetas(1, 0, 0, 10, 0)
    assert draws.shape == (10, 0)


def test_backend_parity_on_default_integrand():
    numpy_kernel = kernels.backend_module("numpy").contrast_values
    cython = pytest.importorskip("spinlock._mc_kernel")
    rng = np.random.default_rng(3)
    theta = rng.uniform(0, 2 * math.pi, (4000, 3))
    a = rng.normal(size=3)
    b = rng.normal(size=3)
    v_np = numpy_kernel(theta, a, b, 0.3, 0.99, 1e-5, 0.02, 8.6e-16, False)
    v_cy = np.asarray(
        cython.contrast_values(theta, a, b, 0.3, 0.99, 1e-5, 0.02, 8.6e-16, False)
    )
    assert np.abs(v_np - v_cy).max() < 1e-12


def test_backend_parity_on_eq23_away_from_nodes():
    # eq23 divides by the fringe slope; near slope zero the cosine argument
    # explodes and last-bit trig differences are amplified, so parity is
    # asserted on a phase range that keeps the slope away from zero
    numpy_kernel = kernels.backend_module("numpy").contrast_values
    cython = pytest.importorskip("spinlock._mc_kernel")
    rng = np.random.default_rng(4)
    theta = rng.uniform(0, 2 * math.pi, (4000, 3))
    a = 0.05 * rng.normal(size=3)
    b = 0.05 * rng.normal(size=3)
    args = (theta, a, b, 0.1, 0.99, 1e-5, 0.02, 8.6e-16, True)
    v_np = numpy_kernel(*args)
    v_cy = np.asarray(cython.contrast_values(*args))
    assert np.abs(v_np - v_cy).max() < 1e-12


def test_active_backend_reports_valid_name():
    assert kernels.active_backend() in ("cython", "numpy")
    with pytest.raises(ConfigError):
        kernels.backend_module("fortran")


def test_no_noise_gives_unit_contrast(default_mc):
    point = mc.fringe_contrast_mc([], LockInSchedule(7, 5e-3), default_mc)
    assert point.estimate == 1.0
    assert point.stderr == 0.0
    assert point.x == pytest.approx(5.0, rel=1e-12)


def test_zero_amplitude_gives_unit_contrast(default_mc):
    comps = [NoiseComponent(0.0, 50.0)]
    point = mc.fringe_contrast_mc(comps, LockInSchedule(7, 5e-3), default_mc)
    assert point.estimate == 1.0
    assert point.stderr == 0.0


def test_repeat_run_is_bit_identical(three_tone_noise, default_mc):
    sched = LockInSchedule(7, 5e-3)
    first = mc.fringe_contrast_mc(three_tone_noise, sched, default_mc)
    second = mc.fringe_contrast_mc(three_tone_noise, sched, default_mc)
    assert first == second


def test_single_sample_has_zero_stderr(three_tone_noise, default_mc):
    from dataclasses import replace

    cfg = replace(default_mc, samples=1)
    point = mc.fringe_contrast_mc(three_tone_noise, LockInSchedule(7, 5e-3), cfg)
    assert point.stderr == 0.0


def test_pinned_phases_remove_sampling_noise(default_mc):
    from spinlock.lockin import accumulated_beta

    comps = [NoiseComponent(10.0, 50.0, phase=0.8), NoiseComponent(4.0, 110.0, phase=2.1)]
    sched = LockInSchedule(7, 5e-3)
    point = mc.fringe_contrast_mc(comps, sched, default_mc)
    assert point.stderr == 0.0
    from spinlock import analytic

    beta = accumulated_beta(comps, [0.8, 2.1], sched)
    cos_fac = analytic.cos_factor(default_mc.alpha, default_mc.n_atoms)
    sin_fac = analytic.sin_factor(default_mc.alpha, default_mc.n_atoms)
    expected = (cos_fac * math.cos(beta) - sin_fac * math.sin(beta)) / cos_fac
    assert point.estimate == pytest.approx(expected, abs=1e-12)


def test_estimates_are_bounded(three_tone_noise, default_mc):
    for tau in (2e-3, 5e-3, 1e-2):
        for integrand in ("ramsey", "eq23"):
            point = mc.fringe_contrast_mc(
                three_tone_noise,
                LockInSchedule(7, tau),
                default_mc,
                integrand=integrand,
            )
            assert -1.0 - 1e-9 <= point.estimate <= 1.0 + 1e-9


def test_integrand_modes_differ(three_tone_noise, default_mc):
    sched = LockInSchedule(7, 5e-3)
    ramsey = mc.fringe_contrast_mc(three_tone_noise, sched, default_mc)
    eq23 = mc.fringe_contrast_mc(
        three_tone_noise, sched, default_mc, integrand="eq23"
    )
    assert ramsey.estimate != eq23.estimate
    with pytest.raises(ConfigError):
        mc.fringe_contrast_mc(
            three_tone_noise, sched, default_mc, integrand="exact"
        )


def test_toggle_off_changes_the_physics(three_tone_noise, default_mc):
    sched = LockInSchedule(7, 5e-3)
    on = mc.fringe_contrast_mc(three_tone_noise, sched, default_mc)
    off = mc.fringe_contrast_mc(three_tone_noise, sched, default_mc, toggle=False)
    assert on.estimate != off.estimate


def test_stderr_scales_inverse_sqrt_samples(three_tone_noise, default_mc):
    from dataclasses import replace

    sched = LockInSchedule(7, 5e-3)
    base = mc.fringe_contrast_mc(three_tone_noise, sched, default_mc)
    quad = mc.fringe_contrast_mc(
        three_tone_noise, sched, replace(default_mc, samples=4 * default_mc.samples)
    )
    assert base.stderr / quad.stderr == pytest.approx(2.0, rel=0.3)


def test_curve_single_point_equals_direct_call(three_tone_noise, default_mc):
    direct = mc.fringe_contrast_mc(
        three_tone_noise, LockInSchedule(7, 5e-3), default_mc, point_index=0
    )
    curve = mc.contrast_curve(three_tone_noise, 7, [5e-3], default_mc)
    assert curve == [direct]


def test_curve_is_thread_count_invariant(three_tone_noise, default_mc):
    grid = np.arange(2e-3, 1.2e-2, 1e-3)
    serial = mc.contrast_curve(three_tone_noise, 7, grid, default_mc, threads=1)
    threaded = mc.contrast_curve(three_tone_noise, 7, grid, default_mc, threads=8)
    assert serial == threaded


def test_measurement_range_full_span():
    curve = [CurvePoint(float(x), 1.0, 0.0) for x in (1, 2, 3, 4)]
    assert mc.measurement_range(curve, 0.9) == (1.0, 4.0)


def test_measurement_range_picks_widest_run():
    values = [1.0, 1.0, 0.5, 1.0]
    curve = [CurvePoint(float(x), v, 0.0) for x, v in zip((1, 2, 3, 4), values)]
    assert mc.measurement_range(curve, 0.9) == (1.0, 2.0)


def test_measurement_range_errors():
    curve = [CurvePoint(1.0, 0.2, 0.0)]
    with pytest.raises(EmptyRangeError):
        mc.measurement_range(curve, 0.9)
    with pytest.raises(ConfigError):
        mc.measurement_range(curve, 1.5)
    with pytest.raises(ConfigError):
        mc.measurement_range([], 0.9)


def test_noiseless_sensitivity_decreases_monotonically(default_mc):
    from dataclasses import replace

    cfg = replace(default_mc, squeeze_duration=0.0, samples=10)
    grid = np.linspace(0.02, 0.4, 12)
    curves = mc.sensitivity_curve([], [50], grid, 7, cfg)
    values = [p.estimate for p in curves[50]]
    assert all(a > b for a, b in zip(values, values[1:]))


def test_sensitivity_stderr_propagation(three_tone_noise, default_mc):
    # T = 16 ms puts the 2 ms arm time on a live fringe (contrast near 1)
    grid = [0.016]
    curves = mc.sensitivity_curve(three_tone_noise, [50], grid, 7, default_mc)
    point = curves[50][0]
    contrast = mc.fringe_contrast_mc(
        three_tone_noise,
        LockInSchedule(7, 0.016 / 8),
        default_mc,
        point_index=0,
        x_value=16.0,
    )
    assert contrast.estimate > 0
    assert point.stderr / point.estimate == pytest.approx(
        contrast.stderr / contrast.estimate, rel=1e-12
    )


def test_sensitivity_handles_dead_fringe(default_mc):
    # a pinned phase that lands the mean fringe amplitude at a negative
    # value means no usable fringe: sensitivity is infinite
    dead = [NoiseComponent(22.0, 100.0, phase=0.5)]
    sched_duration = 8 * 5e-3
    curves = mc.sensitivity_curve(dead, [50], [sched_duration], 7, default_mc)
    point = curves[50][0]
    assert point.estimate == math.inf


def test_sensitivity_atom_scaling(three_tone_noise, default_mc):
    grid = np.linspace(0.04, 0.24, 6)
    curves = mc.sensitivity_curve(
        three_tone_noise, [50, 300, 500], grid, 7, default_mc, threads=4
    )
    minima = [
        min(p.estimate for p in curves[n]) for n in (50, 300, 500)
    ]
    assert minima[0] > minima[1] > minima[2]
