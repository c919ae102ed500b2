"""Trigonometric continuation of densities sampled on the half-period grid.

A function known at the n nodes s_i = (i + 1/2) pi / n of [0, pi] is
extended to a 2*pi-periodic trigonometric series in two stages:

1. *fit*: a regularized least-squares fit (truncated SVD of the sampling
   matrix) onto the band {cos(js), sin(js), j <= J}; this supplies stable
   values on the extension half (pi, 2*pi).
2. *resample*: the original samples together with the fitted extension
   values form a uniform 2n-point grid over [0, 2*pi); its shifted-grid DFT
   yields coefficients of bandwidth n that interpolate the input samples
   exactly.

Stage 2 keeps the samples -> series map full-rank and bounded, which the
system matrix construction requires; stage 1 carries the spectral accuracy
of the continuation.  ``resample=False`` exposes the raw stage-1 fit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "FCError",
    "FCSeries",
    "FCOperator",
    "build_fc_operator",
    "fc_apply",
    "fc_eval",
    "fc_eval_deriv",
]

DEFAULT_OVERSAMPLING = 1.5
DEFAULT_SVD_CUTOFF = 1e-5


class FCError(ValueError):
    """Raised for inconsistent continuation-operator configuration."""


def half_period_nodes(n, offset=0):
    return (np.arange(offset, offset + n) + 0.5) * math.pi / n


def trig_basis(J, s):
    """Columns 1, cos(s)..cos(Js), sin(s)..sin(Js) evaluated at s."""
    s = np.asarray(s, dtype=float)
    cols = np.empty((len(s), 2 * J + 1))
    cols[:, 0] = 1.0
    for j in range(1, J + 1):
        cols[:, j] = np.cos(j * s)
        cols[:, J + j] = np.sin(j * s)
    return cols


@dataclass
class FCSeries:
    """f(s) = sum_j C[j] cos(js) + sum_j D[j] sin(js), j = 0..J.

    Coefficient arrays may be real or complex; D[0] is identically zero.
    """

    C: np.ndarray
    D: np.ndarray

    @property
    def bandwidth(self):
        return len(self.C) - 1

    def eval(self, s):
        return fc_eval(self, s)

    def eval_deriv(self, s):
        return fc_eval_deriv(self, s)


def fc_eval(series: FCSeries, s):
    """Evaluate the trigonometric sum at s (scalar or array)."""
    s = np.asarray(s, dtype=float)
    scalar = s.ndim == 0
    ss = np.atleast_1d(s)
    J = series.bandwidth
    jj = np.arange(J + 1)
    arg = np.outer(ss, jj)
    out = np.cos(arg) @ series.C + np.sin(arg) @ series.D
    return out[0] if scalar else out


def fc_eval_deriv(series: FCSeries, s):
    """Termwise derivative of the trigonometric sum at s."""
    s = np.asarray(s, dtype=float)
    scalar = s.ndim == 0
    ss = np.atleast_1d(s)
    J = series.bandwidth
    jj = np.arange(J + 1)
    arg = np.outer(ss, jj)
    out = -np.sin(arg) @ (jj * series.C) + np.cos(arg) @ (jj * series.D)
    return out[0] if scalar else out


class FCOperator:
    """Precomputed dense map from n half-period samples to series coefficients.

    Attributes
    ----------
    n, J : int
        Sample count and fit bandwidth.
    matrix : ndarray
        The (2*J_out + 1) x n samples-to-coefficients map, with J_out = n for
        the resampled operator and J_out = J for the raw fit.
    singular_values : ndarray
        Singular values of the fit's sampling matrix (conditioning report).
    rank : int
        Retained rank after the svd_cutoff truncation.
    """

    def __init__(self, n, J, oversampling, svd_cutoff, resample=True):
        if n < 8:
            raise FCError("continuation needs at least 8 samples")
        if J < 1:
            raise FCError("bandwidth must be >= 1")
        if 2 * J + 1 > 4 * n:
            raise FCError("bandwidth too large for the sample count")
        self.n = int(n)
        self.J = int(J)
        self.oversampling = float(oversampling)
        self.svd_cutoff = float(svd_cutoff)
        self.resample = bool(resample)
        s = half_period_nodes(n)
        A = trig_basis(J, s)
        U, sig, Vt = np.linalg.svd(A, full_matrices=False)
        keep = sig > svd_cutoff * sig[0]
        self.singular_values = sig
        self.rank = int(np.count_nonzero(keep))
        fit = (Vt[keep].T / sig[keep]) @ U[:, keep].T  # (2J+1) x n
        if not resample:
            self.matrix = fit
            self.bandwidth_out = J
            return
        ext = trig_basis(J, half_period_nodes(n, offset=n)) @ fit  # n x n
        combined = np.vstack([np.eye(n), ext])  # 2n x n
        theta = (2 * np.arange(2 * n) + 1) * math.pi / (2 * n)
        bins = np.exp(-1j * np.outer(np.arange(n + 1), theta)) @ combined / (2 * n)
        rows = np.empty((2 * n + 1, n))
        rows[0] = bins[0].real
        for j in range(1, n):
            rows[j] = 2.0 * bins[j].real
            rows[n + 1 + j - 1] = -2.0 * bins[j].imag
        rows[n] = 0.0  # Nyquist cosine vanishes on the shifted grid
        rows[2 * n] = -bins[n].imag
        self.matrix = rows
        self.bandwidth_out = n

    def apply(self, samples):
        return fc_apply(self, samples)

    def fit_residual(self, samples):
        """Max sample-space misfit of the raw band-J fit (diagnostic)."""
        s = half_period_nodes(self.n)
        A = trig_basis(self.J, s)
        keep = self.singular_values > self.svd_cutoff * self.singular_values[0]
        U, sig, Vt = np.linalg.svd(A, full_matrices=False)
        fit = (Vt[keep].T / sig[keep]) @ U[:, keep].T
        coef = fit @ samples
        return np.max(np.abs(A @ coef - samples))


def build_fc_operator(n, J=None, oversampling=DEFAULT_OVERSAMPLING,
                      svd_cutoff=DEFAULT_SVD_CUTOFF, resample=True) -> FCOperator:
    """Construct the continuation operator for n half-period samples.

    When ``J`` is omitted it is derived from the oversampling ratio
    n / (2J + 1); an explicit ``J`` overrides it (including underdetermined
    fits with 2J + 1 > n, which produce the minimum-norm solution).
    """
    if J is None:
        if oversampling < 1.0:
            raise FCError("oversampling must be >= 1")
        J = max(1, int((n / oversampling - 1) // 2))
    return _cached_operator(int(n), int(J), float(oversampling), float(svd_cutoff), bool(resample))


@lru_cache(maxsize=64)
def _cached_operator(n, J, oversampling, svd_cutoff, resample):
    return FCOperator(n, J, oversampling, svd_cutoff, resample)


def fc_apply(op: FCOperator, samples) -> FCSeries:
    """Map nodal samples (real or complex) to an FCSeries.

    Complex samples are continued componentwise through the same real
    operator.
    """
    samples = np.asarray(samples)
    if samples.shape != (op.n,):
        raise FCError(f"expected {op.n} samples, got {samples.shape}")
    coef = op.matrix @ samples
    J = op.bandwidth_out
    C = coef[: J + 1]
    D = np.concatenate([np.zeros(1, dtype=coef.dtype), coef[J + 1 :]])
    return FCSeries(C=C, D=D)
