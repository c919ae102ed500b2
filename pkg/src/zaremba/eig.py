"""Interior eigenvalue search by scanning the smallest singular value of the
interior system matrix over the wavenumber.

At an interior eigenvalue the homogeneous integral system acquires a
nontrivial null density whose single-layer potential is the eigenfunction,
so sigma_min(A(k)) dips sharply; the scan locates the dips and a V-fit
refines each to the requested tolerance.  An all-Dirichlet single-segment
partition is accepted in validation mode, where disc eigenvalues are known
in closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .assembly import assemble_system
from .fc import fc_apply
from .geometry import build_meshes
from .quadrature import build_block_rules
from .kernels import slp_values
from .fc import fc_eval

__all__ = ["EigenMode", "EigenScanResult", "eigen_scan", "eigenfunction_eval"]

MINIMUM_CONTRAST = 1e-3  # reported minima must dip below this times the median ratio


@dataclass
class EigenMode:
    """One refined eigenvalue estimate with its null density."""

    k: float
    ratio: float
    bracket: tuple
    tolerance: float
    mu: np.ndarray
    series: list
    system: object
    normalization: float = 1.0


@dataclass
class EigenScanResult:
    k_values: np.ndarray
    ratios: np.ndarray
    minima: list = field(default_factory=list)

    @property
    def null_vectors(self):
        return [m.mu for m in self.minima]


def _ratio_and_system(curve, partition, n, k, assembly_kw):
    meshes = build_meshes(curve, partition, n)
    system = assemble_system(curve, partition, meshes, k, gamma=+1.0, **assembly_kw)
    u, s, vh = np.linalg.svd(system.matrix)
    return float(s[-1] / s[0]), system, vh[-1].conj()


def _refine_minimum(fun, k1, k2, k3, f1, f2, f3, tol, max_evals=40,
                    abandon_level=None):
    """Locate the apex of the V-shaped dip of sigma-min ratio.

    Uses the intersection of the two line segments through the outer points
    (the ratio behaves like c|k - k*| near an eigenvalue), safeguarded by
    interval bisection.  A candidate that fails to descend below
    ``abandon_level`` within 14 evaluations is abandoned early (plateau
    noise, not an eigenvalue).
    """
    evals = 0
    while (k3 - k1) > tol and evals < max_evals:
        if abandon_level is not None and evals >= 14 and f2 > abandon_level:
            break
        # V-intersection of lines through (k1,f1)-(k2,f2) and (k2,f2)-(k3,f3)
        sl = (f2 - f1) / (k2 - k1)
        sr = (f3 - f2) / (k3 - k2)
        if sl < 0 < sr:
            kv = (f1 - f3 + sr * k3 - sl * k1) / (sr - sl)
        else:
            kv = 0.5 * (k1 + k3)
        # keep strictly inside and distinct from k2
        if not (k1 < kv < k3) or abs(kv - k2) < 1e-3 * (k3 - k1):
            kv = 0.5 * (k1 + k2) if (k2 - k1) > (k3 - k2) else 0.5 * (k2 + k3)
        fv = fun(kv)
        evals += 1
        pts = sorted([(k1, f1), (k2, f2), (k3, f3), (kv, fv)])
        # retain the best point and its neighbors
        fs = [p[1] for p in pts]
        ib = int(np.argmin(fs))
        ib = min(max(ib, 1), len(pts) - 2)
        (k1, f1), (k2, f2), (k3, f3) = pts[ib - 1], pts[ib], pts[ib + 1]
    return k2, f2, (k1, k3), evals


def eigen_scan(curve, partition, k_range, grid_points=40, refine_tol=1e-7, n=128,
               **assembly_kw) -> EigenScanResult:
    """Scan sigma_min/sigma_max of the interior system over k_range and
    refine each dip below the contrast threshold.

    Returns an empty minima list when no dip qualifies (not an error).
    """
    k_lo, k_hi = float(k_range[0]), float(k_range[1])
    if k_lo <= 0 or k_hi <= k_lo:
        raise ValueError("k_range must be positive and increasing")
    ks = np.linspace(k_lo, k_hi, int(grid_points))
    cache = {}

    def ratio_of(k):
        if k not in cache:
            cache[k] = _ratio_and_system(curve, partition, n, k, assembly_kw)
        return cache[k][0]

    ratios = np.array([ratio_of(k) for k in ks])
    median = float(np.median(ratios))
    result = EigenScanResult(k_values=ks, ratios=ratios)

    # candidates: interior local minima with a real drop against both
    # neighbors (the dips are narrow V's; the contrast filter is applied to
    # the REFINED minimum, since a coarse sample rarely lands on the apex)
    for i in range(1, len(ks) - 1):
        if not (ratios[i] <= ratios[i - 1] and ratios[i] <= ratios[i + 1]):
            continue
        if ratios[i] > 0.99 * min(ratios[i - 1], ratios[i + 1]):
            continue
        k_star, f_star, bracket, _ = _refine_minimum(
            ratio_of, ks[i - 1], ks[i], ks[i + 1],
            ratios[i - 1], ratios[i], ratios[i + 1], refine_tol,
            abandon_level=100.0 * MINIMUM_CONTRAST * median,
        )
        if f_star > MINIMUM_CONTRAST * median:
            continue  # plateau noise, not an eigenvalue
        if any(abs(k_star - m.k) < 10 * refine_tol + 1e-12 for m in result.minima):
            continue
        ratio, system, null_mu = cache[k_star][0], cache[k_star][1], cache[k_star][2]
        series = [fc_apply(system.fc_ops[q],
                           null_mu[system.offsets[q]:system.offsets[q + 1]])
                  for q in range(len(system.meshes))]
        mode = EigenMode(k=float(k_star), ratio=float(ratio), bracket=bracket,
                         tolerance=float(refine_tol), mu=null_mu, series=series,
                         system=system)
        _normalize_mode(mode)
        result.minima.append(mode)
    result.minima.sort(key=lambda m: m.k)
    return result


def _interior_probe_points(curve, count=128):
    poly = curve.polygon()
    lo = poly.min(axis=0)
    hi = poly.max(axis=0)
    rng = np.random.default_rng(1234)
    pts = []
    from .geometry import classify_grid_points

    while len(pts) < count:
        cand = rng.uniform(lo, hi, size=(4 * count, 2))
        mask = classify_grid_points(curve, cand, near_distance=0.05 * np.max(hi - lo))
        good = cand[mask == 1]
        pts.extend(good.tolist())
    return np.array(pts[:count])


def _potential_of_series(system, series, x):
    x = np.asarray(x, dtype=float)
    total = 0.0 + 0.0j
    for q, mesh in enumerate(system.meshes):
        s_nodes, w, _ = build_block_rules(system.curve, mesh, x[None, :], system.k,
                                          jmax=mesh.n, config=system.quad_config)
        y = system.curve.derivative(mesh.t_of_s(s_nodes), 0)
        r = np.hypot(x[0] - y[:, 0], x[1] - y[:, 1])
        total += np.sum(slp_values(system.k, r) * fc_eval(series[q], s_nodes) * w)
    return total


def _normalize_mode(mode: EigenMode, probes=64):
    pts = _interior_probe_points(mode.system.curve, probes)
    amps = np.abs([_potential_of_series(mode.system, mode.series, p) for p in pts])
    scale = float(np.max(amps))
    if scale == 0:
        return
    mode.normalization = scale
    mode.mu = mode.mu / scale
    for s in mode.series:
        s.C /= scale
        s.D /= scale


def eigenfunction_eval(result: EigenScanResult, index: int, x):
    """Eigenfunction (single-layer potential of the null density, normalized
    to unit max sampled interior amplitude) at the interior point x."""
    mode = result.minima[index]
    return _potential_of_series(mode.system, mode.series, np.asarray(x, dtype=float))
