"""Event-triggered gossip SGD simulator."""

from ._core import (
    AssumptionViolation,
    ConfigError,
    ExperimentResult,
    Graph,
    MetricsRow,
    MixingMatrix,
    TopologyError,
    count_full_comm,
    emit_csv,
    ergodic_bound_rhs,
    eta_max,
    generate_topology,
    generate_topology_with_edges,
    load_config,
    metropolis_mixing,
    run_config,
    run_config_file,
    stability_constants,
    validate_config,
)

__all__ = [
    "AssumptionViolation",
    "ConfigError",
    "ExperimentResult",
    "Graph",
    "MetricsRow",
    "MixingMatrix",
    "TopologyError",
    "count_full_comm",
    "emit_csv",
    "ergodic_bound_rhs",
    "eta_max",
    "generate_topology",
    "generate_topology_with_edges",
    "load_config",
    "metropolis_mixing",
    "run_config",
    "run_config_file",
    "stability_constants",
    "validate_config",
]
