# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Monte-Carlo contrast kernel.

Semantic twin of _mc_fallback.contrast_values: one tight nogil loop over
samples instead of whole-array temporaries, which is what makes large
sample counts and many grid points cheap.
"""
import numpy as np

from libc.math cimport cos, sin, sqrt


def contrast_values(
    double[:, ::1] theta,
    double[::1] a,
    double[::1] b,
    double beta0,
    double cos_fac,
    double sin_fac,
    double inv_n,
    double sin_gamma,
    bint eq23,
):
    """Per-sample fringe values; see _mc_fallback.contrast_values."""
    cdef Py_ssize_t n_samples = theta.shape[0]
    cdef Py_ssize_t n_tones = theta.shape[1]
    out_arr = np.empty(n_samples, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i, k
    cdef double beta, th, projection, radicand, denominator

    with nogil:
        for i in range(n_samples):
            beta = beta0
            for k in range(n_tones):
                th = theta[i, k]
                beta += sin(th) * a[k] + cos(th) * b[k]
            if eq23:
                projection = sin_gamma * (cos_fac * sin(beta) + sin_fac * cos(beta))
                radicand = inv_n - projection * projection
                if radicand < 0.0:
                    radicand = 0.0
                denominator = cos_fac * cos(beta) - sin_fac * sin(beta)
                out[i] = cos(sqrt(radicand) / denominator)
            else:
                out[i] = (cos_fac * cos(beta) - sin_fac * sin(beta)) / cos_fac
    return out_arr
