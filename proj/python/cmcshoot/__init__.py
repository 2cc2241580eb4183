"""Closed constant-mean-curvature generating curves in sphere quotients."""

from ._core import (
    Family,
    GeneratingCurve,
    Params,
    ShotResult,
    SolveResult,
    State,
    assemble,
    beta_angle,
    certify,
    check_H,
    exit_radius_factor,
    lift,
    mean_curvature,
    rhs,
    rhs_alpha,
    run_claim_suite,
    shoot,
    solve,
)

__all__ = [
    "Family",
    "GeneratingCurve",
    "Params",
    "ShotResult",
    "SolveResult",
    "State",
    "assemble",
    "beta_angle",
    "certify",
    "check_H",
    "exit_radius_factor",
    "lift",
    "mean_curvature",
    "rhs",
    "rhs_alpha",
    "run_claim_suite",
    "shoot",
    "solve",
]
