"""Command-line entry point.

Commands
--------
solve     : one boundary-value or scattering solve, summary JSON (+ density CSV)
converge  : observable at x0 across a mesh ladder, CSV table
eigs      : interior eigenvalue scan, CSV of the sweep and refined minima
grid      : field evaluation on a regular grid, CSV + JSON sidecar

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
All floating-point output is printed with 17 significant digits so repeated
runs are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .assembly import assemble_rhs, assemble_system
from .config import ConfigError, build_geometry, load_config
from .eig import eigen_scan, eigenfunction_eval
from .field import (
    IncidentWave,
    eval_grid,
    eval_potential,
    interior_source_data,
    near_threshold,
    scattering_data,
)
from .geometry import GeometryError, build_meshes
from .kernels import slp_kernel
from .quadrature import PanelRuleConfig
from .solve import (
    ResonanceGuardConfig,
    SolveError,
    sigma_min_ratio,
    solve_direct,
    solve_with_guard,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _fmt(x):
    return f"{x:.17g}"


def _write_json(path, payload):
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _echo_config(cfg, outdir, prefix):
    _write_json(os.path.join(outdir, f"{prefix}_effective_config.json"), cfg)


def _density_csv(path, system, report):
    with open(path, "w") as fh:
        fh.write("segment,s,re_mu,im_mu\n")
        for q, mesh in enumerate(system.meshes):
            seg = report.mu[system.offsets[q]:system.offsets[q + 1]]
            for s, v in zip(mesh.s_nodes, seg):
                fh.write(f"{q},{_fmt(s)},{_fmt(v.real)},{_fmt(v.imag)}\n")


def _problem_builder(cfg, curve, partition, n):
    """Problem closure k -> (system, rhs) honoring the configured data."""
    mode = cfg["problem"]["mode"]
    alpha = cfg["problem"]["alpha"]
    z0 = np.asarray(cfg["problem"]["source"], dtype=float)
    disc = cfg["discretization"]

    def assemble_at(k):
        meshes = build_meshes(curve, partition, n)
        system = assemble_system(
            curve, partition, meshes, k, gamma=-1.0,
            oversampling=disc["oversampling"], svd_cutoff=disc["svd_cutoff"],
        )
        if mode == "bvp":
            data = interior_source_data(k, z0)
        else:
            data = scattering_data(IncidentWave(k=k, alpha=alpha))
        return system, assemble_rhs(partition, meshes, data)

    return assemble_at


def _observable_closure(points):
    pts = np.atleast_2d(np.asarray(points, dtype=float))

    def observe(system, report):
        return np.array([eval_potential(system, report, p) for p in pts])

    return observe


def _solve_once(cfg, curve, partition, n, k, guard_cfg, force_cont):
    assemble_at = _problem_builder(cfg, curve, partition, n)
    observe = _observable_closure(cfg["problem"]["observation_points"])
    if guard_cfg is not None:
        report, obs = solve_with_guard(assemble_at, k, guard_cfg, observe,
                                       force_continuation=force_cont)
        system, _ = assemble_at(k)
        if report.path == "direct":
            ratio = report.sigma_min_ratio
        else:
            ratio = report.sigma_min_ratio
    else:
        system, rhs = assemble_at(k)
        report = solve_direct(system, rhs)
        report.sigma_min_ratio = sigma_min_ratio(system)
        ratio = report.sigma_min_ratio
        obs = observe(system, report)
    return system, report, obs, ratio


def cmd_solve(cfg, outdir, prefix, guard_cfg, force_cont):
    curve, partition = build_geometry(cfg)
    n = cfg["discretization"]["n"]
    k = cfg["problem"]["k"]
    system, report, obs, ratio = _solve_once(cfg, curve, partition, n, k, guard_cfg, force_cont)
    summary = {
        "mode": cfg["problem"]["mode"],
        "k": k,
        "gamma": -1.0,
        "N": int(system.size),
        "sigma_min_ratio": ratio,
        "path": report.path,
        "residual": report.residual,
        "observables": [[_fmt(v.real), _fmt(v.imag)] for v in obs],
        "diagnostics": report.diagnostics,
    }
    if cfg["problem"]["mode"] == "bvp":
        z0 = np.asarray(cfg["problem"]["source"], dtype=float)
        oracle = [slp_kernel(k, np.asarray(p, dtype=float), z0)
                  for p in cfg["problem"]["observation_points"]]
        err = max(abs(o - v) / abs(o) for o, v in zip(oracle, obs))
        summary["oracle_relative_error"] = err
    _write_json(os.path.join(outdir, f"{prefix}_summary.json"), summary)
    if cfg["output"]["density_csv"]:
        _density_csv(os.path.join(outdir, f"{prefix}_density.csv"), system, report)
    return EXIT_OK


def cmd_converge(cfg, outdir, prefix, guard_cfg, force_cont):
    curve, partition = build_geometry(cfg)
    k = cfg["problem"]["k"]
    n_list = cfg["problem"]["n_list"]
    values = []
    for n in n_list:
        _, _, obs, _ = _solve_once(cfg, curve, partition, n, k, guard_cfg, force_cont)
        values.append(obs[0])
    finest = values[-1]
    path = os.path.join(outdir, f"{prefix}_convergence.csv")
    with open(path, "w") as fh:
        fh.write("n,re_u,im_u,delta_vs_finest\n")
        for n, v in zip(n_list, values):
            fh.write(f"{n},{_fmt(v.real)},{_fmt(v.imag)},{_fmt(abs(v - finest))}\n")
    meta = {
        "kind": "convergence",
        "k": k,
        "mode": cfg["problem"]["mode"],
        "observation_point": cfg["problem"]["observation_points"][0],
        "n_list": n_list,
    }
    if cfg["problem"]["mode"] == "bvp":
        z0 = np.asarray(cfg["problem"]["source"], dtype=float)
        x0 = np.asarray(cfg["problem"]["observation_points"][0], dtype=float)
        oracle = slp_kernel(k, x0, z0)
        meta["oracle"] = [_fmt(oracle.real), _fmt(oracle.imag)]
        meta["oracle_errors"] = [_fmt(abs(v - oracle)) for v in values]
    _write_json(os.path.join(outdir, f"{prefix}_convergence.json"), meta)
    return EXIT_OK


def cmd_eigs(cfg, outdir, prefix):
    curve, partition = build_geometry(cfg)
    scan = eigen_scan(
        curve, partition, cfg["problem"]["k_range"],
        grid_points=cfg["problem"]["scan_points"],
        refine_tol=cfg["problem"]["refine_tol"],
        n=cfg["discretization"]["n"],
        oversampling=cfg["discretization"]["oversampling"],
        svd_cutoff=cfg["discretization"]["svd_cutoff"],
    )
    with open(os.path.join(outdir, f"{prefix}_eigs_sweep.csv"), "w") as fh:
        fh.write("k,sigma_ratio\n")
        for k, r in zip(scan.k_values, scan.ratios):
            fh.write(f"{_fmt(k)},{_fmt(r)}\n")
    minima = [{
        "k": _fmt(m.k),
        "sigma_ratio": _fmt(m.ratio),
        "bracket": [_fmt(m.bracket[0]), _fmt(m.bracket[1])],
        "tolerance": _fmt(m.tolerance),
    } for m in scan.minima]
    _write_json(os.path.join(outdir, f"{prefix}_eigs.json"),
                {"kind": "eigen_scan", "minima": minima,
                 "k_range": cfg["problem"]["k_range"], "n": cfg["discretization"]["n"]})
    return EXIT_OK


def cmd_grid(cfg, outdir, prefix, guard_cfg, force_cont):
    curve, partition = build_geometry(cfg)
    n = cfg["discretization"]["n"]
    k = cfg["problem"]["k"]
    gcfg = cfg["output"]["grid"]
    wave = IncidentWave(k=k, alpha=cfg["problem"]["alpha"])
    system, report, _, ratio = _solve_once(cfg, curve, partition, n, k, guard_cfg, force_cont)
    grid = eval_grid(system, report, gcfg["bounds"], gcfg["nx"], gcfg["ny"],
                     mode=gcfg["mode"], wave=wave)
    base = os.path.join(outdir, f"{prefix}_grid_{gcfg['mode']}")
    grid.meta["sigma_min_ratio"] = ratio
    grid.meta["solve_path"] = report.path
    grid.write_csv(base + ".csv")
    grid.write_meta(base + ".json")
    return EXIT_OK


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="zaremba",
        description="Mixed Dirichlet-Neumann Helmholtz boundary-integral solver",
    )
    parser.add_argument("command", choices=["solve", "converge", "eigs", "grid"])
    parser.add_argument("--config", required=True, help="path to the JSON run config")
    parser.add_argument("--out", default=None, help="output directory (overrides config)")
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--guard-threshold", type=float, default=None,
                        help="enable the resonance guard with this sigma-ratio threshold")
    parser.add_argument("--force-continuation", action="store_true")
    args = parser.parse_args(argv)

    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    outdir = args.out or cfg["output"]["directory"]
    prefix = cfg["output"]["prefix"]
    os.makedirs(outdir, exist_ok=True)

    guard_block = cfg["problem"]["guard"]
    guard_cfg = None
    if guard_block["enabled"] or args.guard_threshold is not None or args.force_continuation:
        guard_cfg = ResonanceGuardConfig(
            threshold=args.guard_threshold if args.guard_threshold is not None
            else guard_block["threshold"],
            delta=guard_block["delta"],
            m_samples=guard_block["m_samples"],
        )

    try:
        _echo_config(cfg, outdir, prefix)
        if args.command == "solve":
            return cmd_solve(cfg, outdir, prefix, guard_cfg, args.force_continuation)
        if args.command == "converge":
            return cmd_converge(cfg, outdir, prefix, guard_cfg, args.force_continuation)
        if args.command == "eigs":
            return cmd_eigs(cfg, outdir, prefix)
        if args.command == "grid":
            return cmd_grid(cfg, outdir, prefix, guard_cfg, args.force_continuation)
    except (ConfigError, GeometryError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SolveError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
