#pragma once

#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

namespace loramab {

inline double dbm_to_watts(double dbm) { return std::pow(10.0, dbm / 10.0) * 1e-3; }
inline double watts_to_dbm(double w) { return 10.0 * std::log10(w * 1e3); }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

/// LoRa-style physical layer constants. Codes are spreading factors 7..12.
struct PhyConfig {
    double bandwidth_hz = 125e3;
    double code_rate = 0.8;  // mu in (0,1]
    std::map<int, double> snr_thresholds_db = {
        {7, -6.0}, {8, -9.0}, {9, -12.0}, {10, -15.0}, {11, -17.5}, {12, -20.0}};
    double sir_threshold_db = 6.0;
    double path_loss_exponent = 4.0;
    // Free-space gain at 868 MHz, 1 m reference distance. Scenarios typically override.
    double path_gain = 7.555e-4;
    double noise_psd_dbm_hz = -174.0;
    double noise_figure_db = 0.0;
    double pa_multiplier = 2.0;       // eta
    double circuit_power_dbm = 10.0;  // P_o

    double noise_psd_w() const { return dbm_to_watts(noise_psd_dbm_hz + noise_figure_db); }
    double noise_power_w() const { return noise_psd_w() * bandwidth_hz; }

    void validate() const;
};

struct Action {
    double power_dbm = 14.0;
    int subchannel = 0;
    int code = 7;
    int repetitions = 1;
};

double data_rate(int code, const PhyConfig& cfg);
double airtime(int code, int payload_bytes, const PhyConfig& cfg);
double tx_energy(const Action& a, int payload_bytes, const PhyConfig& cfg);
double snr_threshold(int code, const PhyConfig& cfg);
double received_power(double p_tx_dbm, double distance_m, double fading_h, const PhyConfig& cfg);

/// Enumerated decision set with precomputed per-action energy cost.
struct ActionSpace {
    std::vector<Action> actions;
    std::vector<double> energy_j;
    double e_min_j = 0.0;

    std::size_t size() const { return actions.size(); }
};

struct ActionSpaceConfig {
    std::vector<double> powers_dbm = {8.0, 14.0};
    int subchannels = 3;
    std::vector<int> codes = {7, 8, 9, 10, 11, 12};
    std::vector<int> repetitions = {1};
};

ActionSpace build_action_space(const ActionSpaceConfig& cfg, int payload_bytes, const PhyConfig& phy);

}  // namespace loramab
