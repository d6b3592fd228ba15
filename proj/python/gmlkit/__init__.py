"""Simulation and verification kernel for learning under regime variation."""

from gmlkit._core import (
    KernelError,
    contractive_step,
    covering_bound,
    default_epsilon,
    effective_contraction,
    entails,
    epsilon_range,
    forward_chain,
    gradient_transport,
    mitchell_collapse,
    pac_chain_bound,
    pac_chain_simulate,
    run_scenario,
    scalarization_obstruction,
    simulate_witness,
    theorem_bound,
    toy_admissible,
    transport_overhead,
    verify_drift,
)

__all__ = [
    "KernelError",
    "contractive_step",
    "covering_bound",
    "default_epsilon",
    "effective_contraction",
    "entails",
    "epsilon_range",
    "forward_chain",
    "gradient_transport",
    "mitchell_collapse",
    "pac_chain_bound",
    "pac_chain_simulate",
    "run_scenario",
    "scalarization_obstruction",
    "simulate_witness",
    "theorem_bound",
    "toy_admissible",
    "transport_overhead",
    "verify_drift",
]
