"""Numerical laboratory for incomplete infinitesimal Lie algebra actions.

Thin wrapper over the C++ core: catalog scenarios, flows with escape
detection, path lifting through the graph foliation, recurrence sets, and the
report-producing decision procedures (hausdorff, proper, orbifold, killing,
slice, bundle).
"""

import json as _json

from ._core import (  # noqa: F401
    LeafspaceError,
    Scenario,
    flow,
    leaf_range,
    lift,
    recurrence,
    scenario,
    scenario_names,
    uniformity,
)
from ._core import run as _run


def run(**config):
    """Run a CLI-equivalent command; returns (exit_code, report_dict).

    Keys mirror the command-line flags: command, example, check, at, n,
    group, budget_K, window_B, grid, samples, tol, seed, out_dir, plus the
    booleans recurrence/lift/atlas/limit_elements.
    """
    code, report = _run(config)
    return code, _json.loads(report)


__all__ = [
    "LeafspaceError",
    "Scenario",
    "flow",
    "leaf_range",
    "lift",
    "recurrence",
    "run",
    "scenario",
    "scenario_names",
    "uniformity",
]
