"""Panel quadrature on the half-period parameter interval [0, pi].

One refinement rule serves every integral in the solver: a panel is split
while (a) its physical diameter exceeds a fixed fraction of its distance to
the evaluation point, (b) the Helmholtz phase across it exceeds the
Gauss-Legendre budget, or (c) the highest trigonometric moment oscillates
too fast across it.  For a target lying on the source segment the interval
is pre-split at the target parameter and rule (a) drives a geometric
cascade toward it, which integrates the logarithmic kernel singularity to
near machine precision; the same mechanism automatically grades toward a
junction shared with a nearby target on another segment.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

__all__ = [
    "gauss_legendre",
    "singular_panel_rule",
    "PanelRuleConfig",
    "build_block_rules",
]

MAX_DEPTH = 40
MIN_PANEL = 3e-13


@lru_cache(maxsize=16)
def gauss_legendre(p: int):
    """Nodes/weights of the p-point Gauss-Legendre rule on [-1, 1]."""
    x, w = np.polynomial.legendre.leggauss(p)
    return x, w


class PanelRuleConfig:
    """Refinement thresholds for :func:`build_block_rules`.

    distance_ratio : split while diameter > ratio * distance-to-target
    kernel_phase   : max k * diameter per panel
    mode_phase     : max (panel length) * j_max per panel
    points         : Gauss-Legendre order per panel
    """

    def __init__(self, distance_ratio=0.8, kernel_phase=12.0, mode_phase=19.0,
                 points=16, max_depth=MAX_DEPTH):
        self.distance_ratio = distance_ratio
        self.kernel_phase = kernel_phase
        self.mode_phase = mode_phase
        self.points = points
        self.max_depth = max_depth


def singular_panel_rule(a: float, b: float, s_sing: float, points: int = 16,
                        max_depth: int = MAX_DEPTH):
    """Geometrically graded composite rule on [a, b] resolving an integrable
    (logarithmic) singularity at s_sing, which may be an endpoint or an
    interior point (the interval is split there first).

    Returns (nodes, weights).
    """
    if not a <= s_sing <= b:
        raise ValueError("singular point must lie inside [a, b]")
    glx, glw = gauss_legendre(points)
    panels = []
    for lo, hi, toward in ((a, s_sing, "hi"), (s_sing, b, "lo")):
        length = hi - lo
        if length < 1e-15:
            continue
        edges = [length]
        while edges[-1] > length * 2.0**-max_depth and edges[-1] > 1e-14:
            edges.append(0.5 * edges[-1])
        if toward == "hi":  # grade toward hi
            pts = [hi - e for e in edges] + [hi]
        else:
            pts = [lo + e for e in reversed(edges)]
            pts = [lo] + pts
        for u, v in zip(pts, pts[1:]):
            if v > u:
                panels.append((u, v))
    nodes = np.concatenate([0.5 * (u + v) + 0.5 * (v - u) * glx for u, v in panels])
    weights = np.concatenate([0.5 * (v - u) * glw for u, v in panels])
    return nodes, weights


def build_block_rules(curve, src_mesh, targets, k, jmax, sigmas=None,
                      config: PanelRuleConfig | None = None):
    """Adaptive rules for integrating kernel(x_t, y(s)) * trig modes over
    [0, pi] on one source segment, for a block of targets at once.

    Parameters
    ----------
    curve, src_mesh : geometry objects (mesh supplies t(s) = c + h cos s)
    targets : (T, 2) evaluation points
    k : wavenumber (phase resolution)
    jmax : highest trigonometric mode the rule must resolve
    sigmas : optional (T,) target parameters in s for targets lying on this
        segment; the rule is split there and graded into the singularity

    Returns
    -------
    s_nodes, weights : flattened node/weight arrays
    offsets : (T+1,) slice boundaries per target
    """
    cfg = config or PanelRuleConfig()
    targets = np.asarray(targets, dtype=float)
    T = len(targets)
    glx, glw = gauss_legendre(cfg.points)

    if sigmas is None:
        a0 = np.zeros(T)
        b0 = np.full(T, math.pi)
        tgt0 = np.arange(T)
        sig_lo = np.full(T, -1.0)  # sentinel: no singular endpoint
        sig_hi = np.full(T, -1.0)
    else:
        sg = np.asarray(sigmas, dtype=float)
        a0 = np.concatenate([np.zeros(T), sg])
        b0 = np.concatenate([sg, np.full(T, math.pi)])
        tgt0 = np.concatenate([np.arange(T), np.arange(T)])
        # mark which endpoint of each interval is the singular parameter
        sig_lo = np.concatenate([np.full(T, -1.0), sg])
        sig_hi = np.concatenate([sg, np.full(T, -1.0)])
        good = b0 - a0 > 1e-15
        a0, b0, tgt0, sig_lo, sig_hi = (v[good] for v in (a0, b0, tgt0, sig_lo, sig_hi))

    done_a, done_b, done_t = [], [], []
    a, b, tgt = a0, b0, tgt0
    depth = 0
    frac = np.array([0.0, 0.25, 0.5, 0.75, 1.0])
    while len(a):
        length = b - a
        ss = a[:, None] + length[:, None] * frac[None, :]
        t_par = src_mesh.center + src_mesh.half_length * np.cos(ss)
        pts = curve.derivative(t_par.ravel(), 0).reshape(len(a), len(frac), 2)
        span = pts.max(axis=1) - pts.min(axis=1)
        diam = np.hypot(span[:, 0], span[:, 1])
        x = targets[tgt]
        d = np.hypot(pts[:, :, 0] - x[:, None, 0], pts[:, :, 1] - x[:, None, 1]).min(axis=1)
        singular = (sig_lo >= 0) | (sig_hi >= 0)
        d = np.where(singular, 0.0, np.maximum(0.0, d - 0.35 * diam))
        refine = (diam > cfg.distance_ratio * d) | (k * diam > cfg.kernel_phase) \
            | (length * jmax > cfg.mode_phase)
        refine &= (depth < cfg.max_depth) & (length > MIN_PANEL)
        keep = ~refine
        if keep.any():
            done_a.append(a[keep])
            done_b.append(b[keep])
            done_t.append(tgt[keep])
        if refine.any():
            ar, br, tr = a[refine], b[refine], tgt[refine]
            mr = 0.5 * (ar + br)
            slo, shi = sig_lo[refine], sig_hi[refine]
            # child adjacent to a singular endpoint keeps the marker
            a = np.concatenate([ar, mr])
            b = np.concatenate([mr, br])
            tgt = np.concatenate([tr, tr])
            sig_lo = np.concatenate([slo, np.full_like(mr, -1.0)])
            sig_hi = np.concatenate([np.full_like(mr, -1.0), shi])
        else:
            break
        depth += 1

    pa = np.concatenate(done_a)
    pb = np.concatenate(done_b)
    pt = np.concatenate(done_t)
    order = np.lexsort((pa, pt))
    pa, pb, pt = pa[order], pb[order], pt[order]
    half = 0.5 * (pb - pa)
    mid = 0.5 * (pa + pb)
    s_nodes = (mid[:, None] + half[:, None] * glx[None, :]).ravel()
    weights = (half[:, None] * glw[None, :]).ravel()
    counts = np.bincount(pt, minlength=T) * cfg.points
    offsets = np.concatenate([[0], np.cumsum(counts)])
    return s_nodes, weights, offsets


def fixed_segment_rule(src_mesh, k, jmax, config: PanelRuleConfig | None = None,
                       min_panels: int = 8):
    """Non-adaptive rule resolving kernel and mode oscillation on a whole
    segment; used for far-field evaluation where no target is close.

    Returns (s_nodes, weights).
    """
    cfg = config or PanelRuleConfig()
    rate = src_mesh.physical_scale()
    n_panels = max(
        min_panels,
        int(math.ceil(math.pi * jmax / cfg.mode_phase)),
        int(math.ceil(math.pi * k * rate / cfg.kernel_phase)),
    )
    edges = np.linspace(0.0, math.pi, n_panels + 1)
    glx, glw = gauss_legendre(cfg.points)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    s_nodes = (mid[:, None] + half[:, None] * glx[None, :]).ravel()
    weights = (half[:, None] * glw[None, :]).ravel()
    return s_nodes, weights
