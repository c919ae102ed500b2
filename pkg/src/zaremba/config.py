"""Run configuration: strict JSON schema with materialized defaults.

The schema is nested key/value; unknown keys are rejected so typos fail
loudly, and the fully-defaulted effective configuration is echoed next to
the outputs so any run can be reproduced byte-for-byte.
"""

from __future__ import annotations

import json
import math
from copy import deepcopy

from .geometry import (
    BoundaryPartition,
    curve_from_coefficients,
    full_dirichlet_partition,
    make_disc,
    make_ellipse,
    make_kite,
)

__all__ = ["ConfigError", "load_config", "validate_config", "build_geometry", "DEFAULTS"]


class ConfigError(ValueError):
    """Raised for malformed or inconsistent run configuration."""


DEFAULTS = {
    "geometry": {
        "type": "kite",           # kite | disc | ellipse | trigpoly
        "radius": 1.0,             # disc
        "semi_axes": [1.0, 1.5],   # ellipse
        "cos1": [], "sin1": [], "cos2": [], "sin2": [],  # trigpoly
    },
    "partition": {
        "segments": "default",    # "default" | "full_dirichlet" | [[t0, t1, "D"|"N"], ...]
    },
    "discretization": {
        "n": 128,
        "oversampling": 1.5,
        "svd_cutoff": 1e-5,
    },
    "problem": {
        "mode": "scattering",     # scattering | bvp | eigs | grid | converge
        "k": 10.0,
        "alpha": math.pi / 8,
        "source": [0.1, 0.0],      # manufactured interior source (bvp mode)
        "observation_points": [[1.0, 2.0]],
        "n_list": [16, 32, 64, 128],
        "k_range": [2.0, 3.0],
        "scan_points": 40,
        "refine_tol": 1e-7,
        "guard": {
            "enabled": False,
            "threshold": 1e-8,
            "delta": 0.05,
            "m_samples": 8,
        },
    },
    "output": {
        "directory": "out",
        "prefix": "run",
        "grid": {
            "bounds": [-3.0, 3.0, -3.0, 3.0],
            "nx": 200,
            "ny": 200,
            "mode": "total",       # scattered | total | incident
        },
        "density_csv": False,
    },
}

_SEGMENT_KINDS = {"D", "N", "d", "n"}


def _check_keys(block, allowed, path):
    for key in block:
        if key not in allowed:
            raise ConfigError(f"unknown key {path}.{key!r}")


def _merge(defaults, user, path=""):
    if not isinstance(user, dict):
        raise ConfigError(f"block {path or '<root>'} must be an object")
    _check_keys(user, defaults.keys(), path or "<root>")
    merged = deepcopy(defaults)
    for key, val in user.items():
        if isinstance(defaults[key], dict) and not key == "grid" and isinstance(val, dict):
            merged[key] = _merge(defaults[key], val, f"{path}.{key}" if path else key)
        elif isinstance(defaults[key], dict) and isinstance(val, dict):
            merged[key] = _merge(defaults[key], val, f"{path}.{key}" if path else key)
        else:
            merged[key] = deepcopy(val)
    return merged


def validate_config(user: dict) -> dict:
    """Merge onto defaults, validate, and return the effective config."""
    cfg = _merge(DEFAULTS, user)
    g = cfg["geometry"]
    if g["type"] not in ("kite", "disc", "ellipse", "trigpoly"):
        raise ConfigError(f"unknown geometry type {g['type']!r}")
    seg = cfg["partition"]["segments"]
    if isinstance(seg, str):
        if seg not in ("default", "full_dirichlet"):
            raise ConfigError("partition.segments must be a list or 'default'/'full_dirichlet'")
    else:
        if not isinstance(seg, list) or not seg:
            raise ConfigError("partition.segments must be a nonempty list")
        for item in seg:
            if (not isinstance(item, (list, tuple)) or len(item) != 3
                    or str(item[2]) not in _SEGMENT_KINDS):
                raise ConfigError("each segment must be [t_start, t_end, 'D'|'N']")
    d = cfg["discretization"]
    if not (isinstance(d["n"], (int, list)) and (isinstance(d["n"], list) or d["n"] >= 8)):
        raise ConfigError("discretization.n must be an int >= 8 or a list")
    if not 0 < d["svd_cutoff"] < 1:
        raise ConfigError("discretization.svd_cutoff must lie in (0, 1)")
    p = cfg["problem"]
    if p["mode"] not in ("scattering", "bvp", "eigs", "grid", "converge"):
        raise ConfigError(f"unknown problem mode {p['mode']!r}")
    if p["k"] <= 0:
        raise ConfigError("problem.k must be positive")
    if p["mode"] == "converge":
        nl = p["n_list"]
        if not isinstance(nl, list) or len(nl) < 3 or sorted(nl) != nl:
            raise ConfigError("problem.n_list must be an ascending list with >= 3 entries")
    guard = p["guard"]
    if not 0 < guard["threshold"] < 1:
        raise ConfigError("guard.threshold must lie in (0, 1)")
    if guard["m_samples"] < 4:
        raise ConfigError("guard.m_samples must be >= 4")
    o = cfg["output"]["grid"]
    if len(o["bounds"]) != 4 or o["bounds"][0] >= o["bounds"][1] or o["bounds"][2] >= o["bounds"][3]:
        raise ConfigError("output.grid.bounds must be [x1min, x1max, x2min, x2max]")
    if o["mode"] not in ("scattered", "total", "incident"):
        raise ConfigError("output.grid.mode must be scattered|total|incident")
    return cfg


def load_config(path: str) -> dict:
    try:
        with open(path) as fh:
            user = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    return validate_config(user)


def build_geometry(cfg: dict):
    """(curve, partition) from the validated geometry/partition blocks."""
    g = cfg["geometry"]
    if g["type"] == "kite":
        curve = make_kite()
    elif g["type"] == "disc":
        curve = make_disc(g["radius"])
    elif g["type"] == "ellipse":
        curve = make_ellipse(*g["semi_axes"])
    else:
        curve = curve_from_coefficients(g["cos1"], g["sin1"], g["cos2"], g["sin2"])
    seg = cfg["partition"]["segments"]
    if seg == "full_dirichlet":
        partition = full_dirichlet_partition()
    elif seg == "default":
        partition = BoundaryPartition.from_list(
            [(-0.5 * math.pi, 0.5 * math.pi, "D"), (0.5 * math.pi, 1.5 * math.pi, "N")]
        )
    else:
        partition = BoundaryPartition.from_list([(s[0], s[1], s[2]) for s in seg])
    return curve, partition
