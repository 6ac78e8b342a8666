"""Grant-free uplink simulator: bandit learners, event-driven radio simulation
and a centralized stochastic-geometry baseline."""

from loramab._core import (
    Action,
    AnalyticModel,
    ConfigError,
    Exp3,
    PacketRecord,
    PhyConfig,
    ReplicationResult,
    Ring,
    RingPlan,
    Rng,
    ScenarioConfig,
    Ucb1,
    airtime,
    data_rate,
    load_config,
    make_ring_plan,
    noise_only_success,
    optimize_ring_densities,
    parse_config,
    received_power,
    ring_laplace,
    ring_laplace_closed,
    ring_plan_objective,
    run,
    run_analytic,
    serialize_config,
    shaped_reward,
    simulate_replication,
    snr_threshold,
    success_probability,
    tx_energy,
    uniform_area_edges,
    validate_config,
)

__all__ = [
    "Action",
    "AnalyticModel",
    "ConfigError",
    "Exp3",
    "PacketRecord",
    "PhyConfig",
    "ReplicationResult",
    "Ring",
    "RingPlan",
    "Rng",
    "ScenarioConfig",
    "Ucb1",
    "airtime",
    "data_rate",
    "load_config",
    "make_ring_plan",
    "noise_only_success",
    "optimize_ring_densities",
    "parse_config",
    "received_power",
    "ring_laplace",
    "ring_laplace_closed",
    "ring_plan_objective",
    "run",
    "run_analytic",
    "serialize_config",
    "shaped_reward",
    "simulate_replication",
    "snr_threshold",
    "success_probability",
    "tx_energy",
    "uniform_area_edges",
    "validate_config",
]
