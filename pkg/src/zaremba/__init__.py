"""High-order boundary-integral solver for the 2D Helmholtz equation under
mixed Dirichlet-Neumann (Zaremba) boundary conditions on smooth closed
curves.

Built on a single-layer representation with cosine-graded Nystrom meshes,
trigonometric-continuation densities, and adaptive singular quadrature.
Includes scattering field evaluation, spurious-resonance handling by
analytic continuation in the wavenumber, and interior eigenvalue search by
singular-value scans.
"""

from .geometry import (
    BoundaryPartition,
    GeometryError,
    ParametricCurve,
    SegmentMesh,
    build_meshes,
    curve_frame,
    make_disc,
    make_ellipse,
    make_kite,
    point_in_domain,
)
from .fc import FCOperator, FCSeries, build_fc_operator, fc_apply, fc_eval, fc_eval_deriv
from .kernels import KernelSplit, adlp_kernel, adlp_kernel_split, slp_kernel, slp_kernel_split
from .assembly import BoundaryData, ZarembaSystem, assemble_rhs, assemble_system, compute_moments
from .solve import ResonanceGuardConfig, SolveError, SolveReport, sigma_min_ratio, solve_direct, solve_with_guard
from .field import FieldGrid, IncidentWave, eval_grid, eval_potential, incident_field, incident_normal_derivative, scattering_solve
from .eig import EigenScanResult, eigen_scan, eigenfunction_eval
from .special import EULER_GAMMA, BesselEval, bessel_eval, bessel_j0_zero

__version__ = "0.1.0"

__all__ = [
    "BesselEval",
    "BoundaryData",
    "BoundaryPartition",
    "EULER_GAMMA",
    "EigenScanResult",
    "FCOperator",
    "FCSeries",
    "FieldGrid",
    "GeometryError",
    "IncidentWave",
    "KernelSplit",
    "ParametricCurve",
    "ResonanceGuardConfig",
    "SegmentMesh",
    "SolveError",
    "SolveReport",
    "ZarembaSystem",
    "adlp_kernel",
    "adlp_kernel_split",
    "assemble_rhs",
    "assemble_system",
    "bessel_eval",
    "bessel_j0_zero",
    "build_fc_operator",
    "build_meshes",
    "compute_moments",
    "curve_frame",
    "eigen_scan",
    "eigenfunction_eval",
    "eval_grid",
    "eval_potential",
    "fc_apply",
    "fc_eval",
    "fc_eval_deriv",
    "incident_field",
    "incident_normal_derivative",
    "make_disc",
    "make_ellipse",
    "make_kite",
    "point_in_domain",
    "scattering_solve",
    "sigma_min_ratio",
    "slp_kernel",
    "slp_kernel_split",
    "solve_direct",
    "solve_with_guard",
]
