"""Closed-loop tweezer trajectories for a dipole-coupled Rydberg pair.

Thin re-export of the compiled extension; see the project README for the
command-line tool and file formats.
"""

from _aaphase import (  # noqa: F401
    ConfigError,
    ExperimentConfig,
    IoError,
    NumericError,
    ObjectiveBreakdown,
    PhaseBreakdown,
    TrajectoryRecord,
    analyze_phases,
    dipole_element,
    initial_control_samples,
    load_config,
    objective,
    objective_gradient,
    optimize,
    parse_config,
    separability,
    simulate,
    simulate_samples,
    units,
    wigner3j,
)

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "IoError",
    "NumericError",
    "ObjectiveBreakdown",
    "PhaseBreakdown",
    "TrajectoryRecord",
    "analyze_phases",
    "dipole_element",
    "initial_control_samples",
    "load_config",
    "objective",
    "objective_gradient",
    "optimize",
    "parse_config",
    "separability",
    "simulate",
    "simulate_samples",
    "units",
    "wigner3j",
]
