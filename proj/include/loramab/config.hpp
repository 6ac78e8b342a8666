#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "loramab/phy.hpp"

namespace loramab {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Policy { Ucb1, Exp3, EqualSplit, Random, Ucb1NoEnergy };

std::string to_string(Policy p);
Policy policy_from_string(const std::string& s);

enum class JamMode { Data, Feedback, Both };

struct JamEntry {
    int subchannel = 0;
    double t_start_s = 0.0;
    double t_end_s = 0.0;
    JamMode mode = JamMode::Data;
    double power_dbm = 0.0;  // received jammer power, data modes
    double drop_prob = 0.0;  // ACK loss probability, feedback modes
};

struct DeploymentConfig {
    double radius_m = 2000.0;
    std::optional<int> count;
    std::optional<double> density_per_m2;
    double packet_interval_s = 200.0;  // T_rep, mean time between packets per device
};

struct LearningConfig {
    double alpha = 0.1;
    double beta = 0.4;
    double rho = 0.4;
    bool literal_eq3 = false;
    bool literal_index = false;
    std::optional<std::vector<double>> transfer_prior;
    long transfer_pseudo_count = 1;
};

struct HorizonConfig {
    std::optional<long> packets_per_device;
    std::optional<double> seconds;
};

struct MetricsConfig {
    int success_window = 50;
    double occupancy_bucket_s = 100.0;
};

struct AnalyticConfig {
    std::vector<int> codes = {7, 10};
    int rings = 2;
    std::optional<double> beta;  // defaults to learning.beta
    std::optional<std::vector<double>> ring_radii;  // rings+1 edges, else uniform-area
    double grid_step = 0.01;
    int ps_table_points = 50;
};

struct ScenarioConfig {
    PhyConfig phy;
    DeploymentConfig deployment;
    ActionSpaceConfig action_space;
    Policy policy = Policy::Ucb1;
    LearningConfig learning;
    std::vector<JamEntry> jamming;
    HorizonConfig horizon;
    int payload_bytes = 20;
    int replications = 1;
    std::uint64_t seed = 1;
    MetricsConfig metrics;
    std::optional<AnalyticConfig> analytic;
};

/// Parses and validates a scenario file. Unknown fields are rejected; every
/// validation failure names the offending field.
ScenarioConfig load_config(const std::string& path);
ScenarioConfig parse_config(const std::string& json_text);
std::string serialize_config(const ScenarioConfig& cfg);
void validate_config(const ScenarioConfig& cfg);

}  // namespace loramab
