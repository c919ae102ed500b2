"""Dense system assembly for the mixed-boundary single-layer formulation.

Unknowns are nodal values of the weighted density

    mu_q(s_i) = psi(y(t(s_i))) * |x'(t(s_i))| * h_q * sin(s_i)

on each segment's cosine-graded grid; the junction singularity of the
physical density psi (inverse square root of the distance) is absorbed by
the weight, leaving a smooth function of s that the trigonometric
continuation represents with spectral accuracy.

Row recipe: for a target node x the integrals over each source segment are
contracted as  (kernel * quadrature weights) . (trig modes) . (FC matrix),
with the quadrature rule graded into the target when it lies on the source
segment.  Dirichlet rows collocate the single-layer potential; Neumann rows
add the nodal jump term  gamma/2 * mu_i / w~_i  to the adjoint kernel
integral.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .fc import FCOperator, build_fc_operator, DEFAULT_OVERSAMPLING, DEFAULT_SVD_CUTOFF
from .geometry import BoundaryPartition, ParametricCurve, SegmentMesh
from .kernels import ChordExpansion, adlp_values, slp_values
from .quadrature import PanelRuleConfig, build_block_rules

__all__ = [
    "AssemblyError",
    "BoundaryData",
    "ZarembaSystem",
    "assemble_system",
    "assemble_rhs",
    "compute_moments",
]


class AssemblyError(RuntimeError):
    """Raised when assembly produces non-finite entries."""


@dataclass
class BoundaryData:
    """Boundary data f on the Dirichlet part and g on the Neumann part.

    ``dirichlet(points)`` and ``neumann(points, normals)`` receive (m, 2)
    arrays and return complex arrays of length m.
    """

    dirichlet: Callable
    neumann: Callable

    @staticmethod
    def zero():
        return BoundaryData(
            dirichlet=lambda p: np.zeros(len(p), dtype=complex),
            neumann=lambda p, n: np.zeros(len(p), dtype=complex),
        )


@dataclass
class ZarembaSystem:
    """Assembled dense collocation system A mu = f.

    gamma is -1 for the exterior problem and +1 for the interior one; row
    and column blocks are ordered by segment with the unknown convention
    described in the module docstring.
    """

    matrix: np.ndarray
    k: float
    gamma: float
    curve: ParametricCurve
    partition: BoundaryPartition
    meshes: list
    fc_ops: list
    offsets: np.ndarray
    quad_config: PanelRuleConfig = field(default_factory=PanelRuleConfig)

    @property
    def size(self):
        return self.matrix.shape[0]

    def node_positions(self):
        return np.concatenate([m.positions for m in self.meshes])

    def node_weights(self):
        return np.concatenate([m.node_weights for m in self.meshes])


def _mode_moments(kw, s_nodes, offsets, n_modes):
    """Rows of integral moments against cos(js), j=0..n, and sin(js), j=1..n.

    kw holds kernel*weight values on the flattened node set; offsets slices
    it per target.  Returns (targets, 2*n_modes+1) complex, column layout
    matching the FC coefficient rows.
    """
    T = len(offsets) - 1
    out = np.empty((T, 2 * n_modes + 1), dtype=complex)
    starts = offsets[:-1]
    two_cos = None
    c_prev = s_prev = c_cur = s_cur = None
    for j in range(n_modes + 1):
        if j == 0:
            c_cur = np.ones_like(s_nodes)
            s_cur = np.zeros_like(s_nodes)
        elif j == 1 or j % 64 == 0:
            c_prev, s_prev = c_cur, s_cur
            c_cur = np.cos(j * s_nodes)
            s_cur = np.sin(j * s_nodes)
            if two_cos is None:
                two_cos = 2.0 * np.cos(s_nodes)
        else:
            c_next = two_cos * c_cur - c_prev
            s_next = two_cos * s_cur - s_prev
            c_prev, s_prev = c_cur, s_cur
            c_cur, s_cur = c_next, s_next
        out[:, j] = np.add.reduceat(kw * c_cur, starts)
        if j >= 1:
            out[:, n_modes + j] = np.add.reduceat(kw * s_cur, starts)
    return out


def _block_rows(curve, chord, tmesh, smesh, k, fc_op, row_kind, quad_config,
                global_target_offset):
    """Dense (n_t, n_s) block coupling one target mesh to one source mesh."""
    same = tmesh is smesh
    sigmas = tmesh.s_nodes if same else None
    s_nodes, w, offs = build_block_rules(
        curve, smesh, tmesh.positions, k, jmax=smesh.n, sigmas=sigmas,
        config=quad_config,
    )
    counts = np.diff(offs)
    tgt_flat = np.repeat(np.arange(tmesh.n), counts)
    if same:
        sg = tmesh.s_nodes[tgt_flat]
        delta = -2.0 * smesh.half_length * np.sin(0.5 * (s_nodes + sg)) * np.sin(0.5 * (s_nodes - sg))
    else:
        t_src = smesh.t_of_s(s_nodes)
        t_tgt = tmesh.t_nodes[tgt_flat]
        delta = (t_src - t_tgt + math.pi) % (2 * math.pi) - math.pi
    r, dot = chord.evaluate(global_target_offset + tgt_flat, delta,
                            need_dot=(row_kind == "N"))
    kvals = slp_values(k, r) if row_kind == "D" else adlp_values(k, r, dot)
    moments = _mode_moments(kvals * w, s_nodes, offs, smesh.n)
    return moments @ fc_op.matrix


def assemble_system(curve, partition, meshes, k, gamma, fc_ops=None,
                    oversampling=DEFAULT_OVERSAMPLING, svd_cutoff=DEFAULT_SVD_CUTOFF,
                    quad_config=None, threads=1) -> ZarembaSystem:
    """Build the dense collocation matrix for wavenumber k.

    gamma = -1 selects the exterior problem, +1 the interior one.  Segment
    FC operators may be supplied; otherwise they are built from the
    oversampling/svd_cutoff parameters.  Resonant wavenumbers are not
    detected here; the solve layer owns that.
    """
    if gamma not in (-1, 1, -1.0, 1.0):
        raise ValueError("gamma must be -1 (exterior) or +1 (interior)")
    if k <= 0:
        raise ValueError("wavenumber must be positive")
    if not meshes:
        raise ValueError("at least one segment mesh is required")
    quad_config = quad_config or PanelRuleConfig()
    if fc_ops is None:
        fc_ops = [build_fc_operator(m.n, oversampling=oversampling, svd_cutoff=svd_cutoff)
                  for m in meshes]
    offsets = np.concatenate([[0], np.cumsum([m.n for m in meshes])])
    N = offsets[-1]
    t_all = np.concatenate([m.t_nodes for m in meshes])
    n_all = np.concatenate([m.normals for m in meshes])
    chord = ChordExpansion(curve, t_all, n_all)

    A = np.zeros((N, N), dtype=complex)
    jobs = [(p, q) for p in range(len(meshes)) for q in range(len(meshes))]

    def run(job):
        p, q = job
        tmesh, smesh = meshes[p], meshes[q]
        block = _block_rows(curve, chord, tmesh, smesh, k, fc_ops[q],
                            tmesh.condition, quad_config, offsets[p])
        return p, q, block

    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as ex:
            results = list(ex.map(run, jobs))
    else:
        results = [run(j) for j in jobs]
    for p, q, block in results:
        A[offsets[p]:offsets[p + 1], offsets[q]:offsets[q + 1]] = block

    for p, mesh in enumerate(meshes):
        if mesh.condition == "N":
            idx = np.arange(offsets[p], offsets[p + 1])
            A[idx, idx] += gamma * 0.5 / mesh.node_weights

    if not np.all(np.isfinite(A)):
        raise AssemblyError("assembled matrix contains non-finite entries")
    return ZarembaSystem(matrix=A, k=float(k), gamma=float(gamma), curve=curve,
                         partition=partition, meshes=list(meshes), fc_ops=list(fc_ops),
                         offsets=offsets, quad_config=quad_config)


def assemble_rhs(partition, meshes, data: BoundaryData):
    """Right-hand side: f at Dirichlet nodes, g at Neumann nodes."""
    parts = []
    for mesh in meshes:
        if mesh.condition == "D":
            vals = np.asarray(data.dirichlet(mesh.positions), dtype=complex)
        else:
            vals = np.asarray(data.neumann(mesh.positions, mesh.normals), dtype=complex)
        if vals.shape != (mesh.n,):
            raise AssemblyError("boundary data returned a wrong-length array")
        parts.append(vals)
    return np.concatenate(parts)


def compute_moments(curve, mesh: SegmentMesh, fc_op: FCOperator, target, kernel, k,
                    normal=None, sigma=None, quad_config=None):
    """Moment row: integrals of the chosen kernel against the trig modes
    cos(js), j = 0..n, and sin(js), j = 1..n, over one source segment.

    ``target`` is an off-curve point, or, with ``sigma`` given, the on-curve
    point at parameter t(sigma) of this segment (the rule is then graded
    into the singularity).  ``kernel`` is "slp" or "adlp"; the adjoint
    kernel needs ``normal``.
    """
    quad_config = quad_config or PanelRuleConfig()
    target = np.asarray(target, dtype=float)
    kernel = kernel.lower()
    if kernel not in ("slp", "adlp"):
        raise ValueError("kernel must be 'slp' or 'adlp'")
    if kernel == "adlp" and normal is None:
        raise ValueError("the adjoint kernel needs the target normal")
    sig_arr = None if sigma is None else np.array([float(sigma)])
    s_nodes, w, _ = build_block_rules(curve, mesh, target[None, :], k,
                                      jmax=mesh.n, sigmas=sig_arr, config=quad_config)
    if sigma is not None:
        t_tgt = float(mesh.t_of_s(float(sigma)))
        chord = ChordExpansion(curve, [t_tgt],
                               [normal if normal is not None else np.array([1.0, 0.0])])
        sg = float(sigma)
        delta = -2.0 * mesh.half_length * np.sin(0.5 * (s_nodes + sg)) * np.sin(0.5 * (s_nodes - sg))
        r, dot = chord.evaluate(np.zeros(len(s_nodes), dtype=int), delta,
                                need_dot=(kernel == "adlp"))
    else:
        y = curve.derivative(mesh.t_of_s(s_nodes), 0)
        d = target[None, :] - y
        r = np.hypot(d[:, 0], d[:, 1])
        dot = d @ np.asarray(normal, dtype=float) if normal is not None else None
    kvals = slp_values(k, r) if kernel == "slp" else adlp_values(k, r, dot)
    offs = np.array([0, len(s_nodes)])
    return _mode_moments(kvals * w, s_nodes, offs, mesh.n)[0]
