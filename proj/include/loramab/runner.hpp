#pragma once

#include <string>

#include "loramab/config.hpp"
#include "loramab/sim.hpp"

namespace loramab {

// CLI exit codes
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitRuntimeError = 3;
inline constexpr int kExitValidationGate = 4;

struct RunSummary {
    int replications = 0;
    std::uint64_t seed = 0;
    long packets_total = 0;
    double windowed_success_mean = 0.0;
    double windowed_success_stddev = 0.0;
    double mean_energy_per_packet_j = 0.0;
    double mean_energy_per_delivered_packet_j = 0.0;
    double convergence_packet_index = -1.0;  // mean over replications, -1 if unsettled
};

/// Runs every replication (worker count from LORAMAB_WORKERS), then writes
/// metrics.csv, occupancy.csv and summary.json into out_dir. Partial outputs
/// are removed on failure. Deterministic per (config, seed).
RunSummary run_command(const ScenarioConfig& cfg, const std::string& out_dir);

/// Runs replications in parallel and returns them ordered by index.
std::vector<ReplicationResult> run_replications(const ScenarioConfig& cfg);

/// Optimizes the ring densities and writes ringplan.csv plus ps_table.csv.
/// Throws ConfigError when the config is outside the analytic scope and
/// std::runtime_error when the closed-form/quadrature cross-check fails.
void analytic_command(const ScenarioConfig& cfg, const std::string& out_dir);

}  // namespace loramab
