"""Helmholtz layer-potential kernels and their log/smooth splittings.

The single-layer kernel is G_k(x, y) = (i/4) H^1_0(k r), r = |x - y|; the
Neumann trace uses its normal derivative at the target,
dG_k/dn_x = -(i k / 4) H^1_1(k r) (n_x . (x - y)) / r.

Both kernels split as  total = log_factor * log(r) + smooth  with

    SLP : log_factor = -J0(k r) / (2 pi)
    aDLP: log_factor = (k / (2 pi)) J1(k r) (n_x . (x - y)) / r

The smooth parts are evaluated by subtraction away from the diagonal and by
the Bessel series tails for k r < 1e-2, where subtraction cancels.

For target and source on the same smooth curve, n_x . (x - y) vanishes like
r^2 on the diagonal; :class:`ChordExpansion` evaluates r and this dot
product from parameter-space Taylor tables so the adjoint kernel stays
accurate to machine precision arbitrarily close to the diagonal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .special import (
    bessel_j1y1_with_tail,
    EULER_GAMMA,
    bessel_j0y0,
    bessel_j1y1,
    hankel1_0,
    hankel1_1,
    y0_series_tail,
    y1_series_tail,
)

__all__ = [
    "KernelSplit",
    "slp_kernel",
    "slp_kernel_split",
    "adlp_kernel",
    "adlp_kernel_split",
    "slp_smooth_diagonal",
    "adlp_smooth_diagonal",
    "ChordExpansion",
    "slp_values",
    "adlp_values",
]

_SERIES_SPLIT_KR = 1e-2
_TAYLOR_ORDER = 10


def _r_of(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    d = x - y
    r = np.hypot(d[..., 0], d[..., 1])
    if np.any(r == 0.0):
        raise ValueError("kernel evaluated at coincident points")
    return d, r


def slp_kernel(k, x, y):
    """(i/4) H^1_0(k |x - y|); vectorized over trailing point axes."""
    _, r = _r_of(x, y)
    return 0.25j * hankel1_0(k * r)


def adlp_kernel(k, x, n_x, y):
    """dG_k/dn_x = -(i k/4) H^1_1(k r) (n_x . (x - y)) / r."""
    d, r = _r_of(x, y)
    dot = d[..., 0] * np.asarray(n_x)[..., 0] + d[..., 1] * np.asarray(n_x)[..., 1]
    return -0.25j * k * hankel1_1(k * r) * dot / r


@dataclass(frozen=True)
class KernelSplit:
    """total = log_factor * log(r) + smooth_part, at separation r."""

    log_factor: complex
    smooth_part: complex
    total: complex
    r: float


def slp_smooth_diagonal(k):
    """Diagonal limit of the SLP smooth part: i/4 - (gamma_E + log(k/2))/(2 pi)."""
    return 0.25j - (EULER_GAMMA + math.log(0.5 * k)) / (2 * math.pi)


def adlp_smooth_diagonal(curvature):
    """Diagonal limit of the adjoint-kernel smooth part on a smooth curve."""
    return -curvature / (4 * math.pi)


def slp_kernel_split(k, x, y) -> KernelSplit:
    """Log/smooth split of the single-layer kernel (scalar points)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    r = math.hypot(x[0] - y[0], x[1] - y[1])
    if r == 0.0:
        raise ValueError("kernel evaluated at coincident points")
    z = k * r
    j0, y0v = bessel_j0y0(z)
    log_factor = -j0 / (2 * math.pi)
    if z < _SERIES_SPLIT_KR:
        smooth = 0.25j * j0 - ((math.log(0.5 * k) + EULER_GAMMA) * j0 + float(y0_series_tail(np.array([z]))[0])) / (2 * math.pi)
        total = log_factor * math.log(r) + smooth
    else:
        total = 0.25j * (j0 + 1j * y0v)
        smooth = total - log_factor * math.log(r)
    return KernelSplit(log_factor=complex(log_factor), smooth_part=complex(smooth),
                       total=complex(total), r=r)


def adlp_kernel_split(k, x, n_x, y) -> KernelSplit:
    """Log/smooth split of the adjoint double-layer kernel (scalar points)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n_x = np.asarray(n_x, dtype=float)
    d = x - y
    r = math.hypot(d[0], d[1])
    if r == 0.0:
        raise ValueError("kernel evaluated at coincident points")
    dot = float(d @ n_x)
    z = k * r
    j1, y1v = bessel_j1y1(z)
    log_factor = k / (2 * math.pi) * j1 * dot / r
    if z < _SERIES_SPLIT_KR:
        t1 = float(y1_series_tail(np.array([z]))[0])
        smooth = (
            k / (2 * math.pi) * (math.log(0.5 * k) + EULER_GAMMA) * j1 * dot / r
            - dot / (2 * math.pi * r * r)
            - k * k / (8 * math.pi) * t1 * dot
            - 0.25j * k * j1 * dot / r
        )
        total = log_factor * math.log(r) + smooth
    else:
        total = -0.25j * k * (j1 + 1j * y1v) * dot / r
        smooth = total - log_factor * math.log(r)
    return KernelSplit(log_factor=complex(log_factor), smooth_part=complex(smooth),
                       total=complex(total), r=r)


# ---------------------------------------------------------------------------
# stable chord geometry along a curve
# ---------------------------------------------------------------------------
class ChordExpansion:
    """Taylor tables for the chord between nearby points of one curve.

    For targets x = y(t_x) with outward normals n_x, evaluates, given
    parameter offsets delta = t_y - t_x,

        r(delta)   = |y(t_x) - y(t_x + delta)|
        dot(delta) = n_x . (y(t_x) - y(t_x + delta))

    using order-10 expansions for |delta| below the curve's Taylor radius
    (where direct differencing loses the r^2-small dot product to rounding)
    and direct evaluation otherwise.
    """

    def __init__(self, curve, t_targets, normals):
        self.curve = curve
        self.t = np.atleast_1d(np.asarray(t_targets, dtype=float))
        normals = np.atleast_2d(np.asarray(normals, dtype=float))
        self.radius = curve.taylor_radius
        P = _TAYLOR_ORDER
        ders = np.stack([curve.derivative(self.t, j) for j in range(1, P + 1)], axis=1)
        fact = np.array([math.factorial(j) for j in range(P + 1)])
        # r^2 = sum_{m=2}^{2P} A_m delta^m, A_m = sum_{a+b=m} (y_a . y_b)/(a! b!)
        self.A = np.zeros((len(self.t), 2 * P + 1))
        for aa in range(1, P + 1):
            for bb in range(1, P + 1):
                dots = np.sum(ders[:, aa - 1] * ders[:, bb - 1], axis=1)
                self.A[:, aa + bb] += dots / (fact[aa] * fact[bb])
        # dot = -sum_{m=2}^{P} B_m delta^m, B_m = (n_x . y_m)/m!
        self.B = np.zeros((len(self.t), P + 1))
        for m in range(2, P + 1):
            self.B[:, m] = np.sum(normals * ders[:, m - 1], axis=1) / fact[m]

    def evaluate(self, target_idx, delta, need_dot=True):
        """(r, dot) arrays for offsets ``delta`` of targets ``target_idx``."""
        delta = np.asarray(delta, dtype=float)
        target_idx = np.asarray(target_idx)
        r = np.empty_like(delta)
        dot = np.empty_like(delta) if need_dot else None
        near = np.abs(delta) < self.radius
        far = ~near
        if far.any():
            tx = self.t[target_idx[far]]
            x = self.curve.derivative(tx, 0)
            y = self.curve.derivative(tx + delta[far], 0)
            d = x - y
            r[far] = np.hypot(d[:, 0], d[:, 1])
            if need_dot:
                v = self.curve.derivative(tx, 1)
                sp = np.hypot(v[:, 0], v[:, 1])
                dot[far] = (d[:, 0] * v[:, 1] - d[:, 1] * v[:, 0]) / sp
        if near.any():
            dl = delta[near]
            idx = target_idx[near]
            P = _TAYLOR_ORDER
            r2 = self.A[idx, 2 * P].copy()
            for m in range(2 * P - 1, 1, -1):
                r2 = r2 * dl + self.A[idx, m]
            r2 = r2 * dl * dl
            r[near] = np.sqrt(np.abs(r2))
            if need_dot:
                dn = self.B[idx, P].copy()
                for m in range(P - 1, 1, -1):
                    dn = dn * dl + self.B[idx, m]
                dot[near] = -dn * dl * dl
        return r, dot


def slp_values(k, r):
    """Vectorized SLP kernel from precomputed separations."""
    return 0.25j * hankel1_0(k * np.maximum(r, 1e-300))


def adlp_values(k, r, dot):
    """Vectorized adjoint kernel from stable (r, n_x.(x-y)) pairs.

    Composed from series pieces for k r < 1e-2 so the -2/(pi z) pole of Y1
    multiplies the r^2-small dot product without forming huge intermediates.
    """
    r = np.maximum(np.asarray(r, dtype=float), 1e-300)
    dot = np.asarray(dot, dtype=float)
    z = k * r
    out = np.empty(r.shape, dtype=complex)
    near = z < _SERIES_SPLIT_KR
    far = ~near
    if far.any():
        out[far] = -0.25j * k * hankel1_1(z[far]) * dot[far] / r[far]
    if near.any():
        zn = z[near]
        rn = r[near]
        dn = dot[near]
        j1, _, t1 = bessel_j1y1_with_tail(zn)
        ratio = dn / (rn * rn)
        real = (
            k / (2 * math.pi) * (np.log(0.5 * k * rn) + EULER_GAMMA) * j1 * rn * ratio
            - ratio / (2 * math.pi)
            - k * k / (8 * math.pi) * t1 * dn
        )
        imag = -0.25 * k * j1 * rn * ratio
        out[near] = real + 1j * imag
    return out
