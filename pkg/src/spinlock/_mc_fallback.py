"""Vectorized numpy fallback for the Monte-Carlo contrast kernel.

Must stay semantically identical to the compiled kernel in _mc_kernel.pyx;
both map a block of sampled tone phases to per-sample fringe values.  Kept
dependency-free beyond numpy so the package works without a C toolchain.
"""
from __future__ import annotations

import numpy as np


def contrast_values(
    theta: np.ndarray,
    a: np.ndarray,
    b: np.ndarray,
    beta0: float,
    cos_fac: float,
    sin_fac: float,
    inv_n: float,
    sin_gamma: float,
    eq23: bool,
) -> np.ndarray:
    """Per-sample fringe values for sampled phases theta (n_samples, n_tones).

    beta = beta0 + sin(theta) . a + cos(theta) . b per sample.  In the
    default mode the value is the normalized fringe amplitude
    (cos_fac cos(beta) - sin_fac sin(beta)) / cos_fac; in eq23 mode it is
    cos(delta_phi) with the phase-resolution formula evaluated at beta,
    radicand clamped at zero (sin_gamma is ~0 for integer-pi drive, so the
    clamp only absorbs rounding).
    """
    beta = beta0 + np.sin(theta) @ a + np.cos(theta) @ b
    if not eq23:
        return (cos_fac * np.cos(beta) - sin_fac * np.sin(beta)) / cos_fac
    projection = sin_gamma * (cos_fac * np.sin(beta) + sin_fac * np.cos(beta))
    radicand = np.maximum(inv_n - projection * projection, 0.0)
    denominator = cos_fac * np.cos(beta) - sin_fac * np.sin(beta)
    return np.cos(np.sqrt(radicand) / denominator)
