"""Direct solution, resonance detection, and analytic continuation in k.

For an exterior problem the boundary-value problem itself is uniquely
solvable at every real wavenumber, but the integral formulation loses
injectivity whenever k^2 is a Dirichlet eigenvalue of the complementary
interior region.  Near such spurious resonances the system matrix becomes
ill-conditioned; the guard detects this through the ratio of extreme
singular values and, when triggered, reconstructs field observables at the
requested k by fitting a polynomial in k through solves at nearby regular
wavenumbers (field values depend analytically on k even where the density
degenerates, so they continue across the resonance).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .assembly import ZarembaSystem
from .fc import FCSeries, fc_apply

__all__ = [
    "SolveError",
    "ResonanceError",
    "SolveReport",
    "ResonanceGuardConfig",
    "solve_direct",
    "sigma_min_ratio",
    "solve_with_guard",
]


class SolveError(RuntimeError):
    """Raised when the linear-algebra stage fails."""


class ResonanceError(SolveError):
    """Raised for an exactly singular system; retry through the guard."""


@dataclass
class SolveReport:
    """Solution record: nodal weighted density, its per-segment series, and
    conditioning/continuation diagnostics."""

    mu: np.ndarray
    series: list
    sigma_min_ratio: float | None
    path: str  # "direct" or "continued"
    residual: float
    k: float
    diagnostics: dict = field(default_factory=dict)

    def segment_series(self, q) -> FCSeries:
        return self.series[q]

    def psi_at_nodes(self, system: ZarembaSystem):
        """Physical density psi at the nodes (mu divided by its weight)."""
        return self.mu / system.node_weights()


@dataclass
class ResonanceGuardConfig:
    """Guard thresholds: minimum healthy sigma_min/sigma_max, continuation
    half-width in k, and the Chebyshev sample count."""

    threshold: float = 1e-8
    delta: float = 0.05
    m_samples: int = 8

    def __post_init__(self):
        if not 0 < self.threshold < 1:
            raise ValueError("threshold must lie in (0, 1)")
        if self.m_samples < 4:
            raise ValueError("need at least 4 continuation samples")
        if self.delta <= 0:
            raise ValueError("continuation half-width must be positive")


def _attach_series(system: ZarembaSystem, mu):
    out = []
    for q, mesh in enumerate(system.meshes):
        seg = mu[system.offsets[q]:system.offsets[q + 1]]
        out.append(fc_apply(system.fc_ops[q], seg))
    return out


def solve_direct(system: ZarembaSystem, rhs, svd=None) -> SolveReport:
    """LU solve (partial pivoting) of the assembled system.

    When a precomputed SVD triple is passed the solution is formed from it
    instead (the guard reuses the decomposition it needed anyway).  Raises
    :class:`ResonanceError` on an exactly singular matrix.
    """
    rhs = np.asarray(rhs, dtype=complex)
    if rhs.shape != (system.size,):
        raise SolveError("right-hand side has the wrong length")
    try:
        if svd is None:
            mu = np.linalg.solve(system.matrix, rhs)
            ratio = None
        else:
            u, s, vh = svd
            mu = vh.conj().T @ ((u.conj().T @ rhs) / s)
            ratio = float(s[-1] / s[0])
    except np.linalg.LinAlgError as exc:
        raise ResonanceError(
            "singular system matrix: wavenumber coincides with a spurious "
            "resonance; solve through the resonance guard"
        ) from exc
    denom = float(np.max(np.abs(rhs)))
    resid = float(np.max(np.abs(system.matrix @ mu - rhs)) / denom) if denom > 0 else 0.0
    return SolveReport(mu=mu, series=_attach_series(system, mu),
                       sigma_min_ratio=ratio, path="direct", residual=resid,
                       k=system.k)


def sigma_min_ratio(system: ZarembaSystem, return_svd=False):
    """sigma_min / sigma_max of the system matrix from a full SVD."""
    u, s, vh = np.linalg.svd(system.matrix)
    ratio = float(s[-1] / s[0])
    if return_svd:
        return ratio, (u, s, vh)
    return ratio


def _chebyshev_points(lo, hi, m):
    j = np.arange(m)
    x = np.cos((2 * j + 1) * math.pi / (2 * m))
    return 0.5 * (lo + hi) + 0.5 * (hi - lo) * x


def solve_with_guard(assemble_at, k0, guard: ResonanceGuardConfig, observe,
                     force_continuation=False):
    """Solve at k0 with spurious-resonance protection.

    Parameters
    ----------
    assemble_at : callable k -> (ZarembaSystem, rhs)
        Problem builder; boundary data must be evaluated at the sampled k.
    observe : callable (system, report) -> complex ndarray
        Field observables to report (these, not densities, are continued).
    guard : ResonanceGuardConfig

    Returns
    -------
    (SolveReport, observables) with report.path = "direct" or "continued".
    """
    system, rhs = assemble_at(k0)
    ratio, svd = sigma_min_ratio(system, return_svd=True)
    if ratio >= guard.threshold and not force_continuation:
        report = solve_direct(system, rhs, svd=svd)
        report.sigma_min_ratio = ratio
        report.diagnostics["guard"] = {"threshold": guard.threshold, "triggered": False}
        return report, np.asarray(observe(system, report))

    delta = guard.delta
    excluded_total = []
    for attempt in range(3):
        ks = _chebyshev_points(k0 - delta, k0 + delta, guard.m_samples)
        samples = []
        excluded = []
        for kk in ks:
            if kk <= 0:
                excluded.append(float(kk))
                continue
            sys_k, rhs_k = assemble_at(kk)
            r_k, svd_k = sigma_min_ratio(sys_k, return_svd=True)
            if r_k < guard.threshold:
                excluded.append(float(kk))
                continue
            rep_k = solve_direct(sys_k, rhs_k, svd=svd_k)
            samples.append((float(kk), np.asarray(observe(sys_k, rep_k)), rep_k, r_k))
        excluded_total.extend(excluded)
        if len(samples) >= max(4, guard.m_samples // 2):
            break
        delta *= 2.0
    if len(samples) < 4:
        raise SolveError(
            "resonance continuation failed: fewer than 4 regular sample "
            "wavenumbers found after widening the interval twice"
        )

    k_s = np.array([s[0] for s in samples])
    obs = np.stack([s[1] for s in samples])
    degree = len(samples) - 1
    # least-squares polynomial fit in the shifted/scaled variable
    xi = (k_s - k0) / delta
    V = np.vander(xi, degree + 1, increasing=True)
    coef, *_ = np.linalg.lstsq(V, obs, rcond=None)
    values = coef[0]  # evaluation at xi = 0

    nearest = int(np.argmin(np.abs(k_s - k0)))
    rep = samples[nearest][2]
    report = SolveReport(
        mu=rep.mu, series=rep.series, sigma_min_ratio=ratio, path="continued",
        residual=rep.residual, k=float(k0),
        diagnostics={
            "guard": {"threshold": guard.threshold, "triggered": True},
            "sample_wavenumbers": k_s.tolist(),
            "excluded_wavenumbers": excluded_total,
            "fit_degree": degree,
            "half_width": delta,
            "density_from_k": float(k_s[nearest]),
        },
    )
    return report, values
