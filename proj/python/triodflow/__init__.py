"""Curvature flow of planar triods.

Thin wrapper over the C++ core. Curves are (n, 2) float arrays; triods are
lists of three curves sharing their first point.
"""

import json as _json

import numpy as np

from . import _core
from ._core import (
    DegenerateGeometry,
    InvalidInput,
    InvalidProbe,
    angle_defect,
    curvature,
    embeddedness_ratio,
    estimate_blowup,
    gaussian_density,
    grim_reaper,
    junction_curvatures,
    lambda_from_k,
    polyline_length,
    resample_uniform,
    shrinker_residual,
    steiner_point,
    translator_residual,
)

__all__ = [
    "DegenerateGeometry",
    "InvalidInput",
    "InvalidProbe",
    "angle_defect",
    "build_scenario",
    "cli",
    "curvature",
    "embeddedness_ratio",
    "estimate_blowup",
    "gaussian_density",
    "grim_reaper",
    "junction_curvatures",
    "lambda_from_k",
    "polyline_length",
    "resample_uniform",
    "run",
    "shrinker_residual",
    "steiner_point",
    "translator_residual",
    "validate",
]


def build_scenario(family, params=None, seed=0):
    """Return (curves, is_triod) for a named initial configuration."""
    return _core.build_scenario(family, _json.dumps(params or {}), seed)


def validate(config):
    """Check compatibility conditions; returns (ok, report)."""
    return _core.validate(_json.dumps(config))


def run(config):
    """Evolve a scenario config (a dict, same schema as the CLI).

    Returns a dict with the stop reason, final curves and the monitor series
    as a structured numpy array.
    """
    out = _core.run(_json.dumps(config))
    lines = out.pop("csv").splitlines()
    names = lines[0].split(",")
    rows = np.array([[float(v) for v in line.split(",")] for line in lines[1:]])
    out["series"] = {name: rows[:, i] for i, name in enumerate(names)}
    return out


def cli(args):
    """Run the command line tool in-process; returns the exit code."""
    return _core.cli([str(a) for a in args])
