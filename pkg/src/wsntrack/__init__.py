"""Discrete-event simulation of multi-target tracking in a multi-hop sensor network.

Three reporting strategies are modelled (centralized readings, decentralized
self-reports, and grouped reports aggregated by an elected leader), together
with the closed-form message and energy counts they are compared against.
"""

from .analytics import AnalyticsInputs, compare_sim_to_closed_form, cost_report, predict_energy
from .config import ConfigError, SimConfig, load_config, validate_config
from .simulation import Simulation, run
from .topology import NetworkTopology, NodeRole, TopologyError, build_grid_topology, topology_from_positions

__version__ = "0.1.0"

__all__ = [
    "AnalyticsInputs",
    "ConfigError",
    "NetworkTopology",
    "NodeRole",
    "SimConfig",
    "Simulation",
    "TopologyError",
    "build_grid_topology",
    "compare_sim_to_closed_form",
    "cost_report",
    "load_config",
    "predict_energy",
    "run",
    "topology_from_positions",
    "validate_config",
]
