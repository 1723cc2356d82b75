"""Fast-forward matter-wave splitting: trap design, propagation and fidelity sweeps."""

from ffsplit._core import (
    ConfigError,
    EigenPair,
    Grid,
    PotentialTrace,
    SolverError,
    SplittingLab,
    TwoModeSystem,
    Units,
    analytic_eigensystem,
    gp_ground_state,
    lowest_eigenpairs,
    parse_config,
    perturb,
    propagate,
    sweep,
)

__all__ = [
    "ConfigError",
    "EigenPair",
    "Grid",
    "PotentialTrace",
    "SolverError",
    "SplittingLab",
    "TwoModeSystem",
    "Units",
    "analytic_eigensystem",
    "gp_ground_state",
    "lowest_eigenpairs",
    "parse_config",
    "perturb",
    "propagate",
    "sweep",
]
