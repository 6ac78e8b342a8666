#include "loramab/phy.hpp"

#include <algorithm>

namespace loramab {

void PhyConfig::validate() const {
    if (!(bandwidth_hz > 0.0)) throw std::invalid_argument("phy.bandwidth_hz must be positive");
    if (!(code_rate > 0.0) || code_rate > 1.0)
        throw std::invalid_argument("phy.code_rate must be in (0,1]");
    if (!(path_loss_exponent > 2.0))
        throw std::invalid_argument("phy.path_loss_exponent must exceed 2");
    if (!(path_gain > 0.0)) throw std::invalid_argument("phy.path_gain must be positive");
    double prev = 1e9;
    for (int c = 7; c <= 12; ++c) {
        auto it = snr_thresholds_db.find(c);
        if (it == snr_thresholds_db.end())
            throw std::invalid_argument("phy.snr_thresholds_db missing code " + std::to_string(c));
        if (!(it->second < prev))
            throw std::invalid_argument("phy.snr_thresholds_db must be strictly decreasing in code");
        prev = it->second;
    }
}

static void check_code(int code) {
    if (code < 7 || code > 12)
        throw std::invalid_argument("code must be in 7..12, got " + std::to_string(code));
}

double data_rate(int code, const PhyConfig& cfg) {
    check_code(code);
    return code * cfg.bandwidth_hz * cfg.code_rate / std::pow(2.0, code);
}

double airtime(int code, int payload_bytes, const PhyConfig& cfg) {
    return 8.0 * payload_bytes / data_rate(code, cfg);
}

double tx_energy(const Action& a, int payload_bytes, const PhyConfig& cfg) {
    const double radiated = cfg.pa_multiplier * dbm_to_watts(a.power_dbm);
    const double circuit = dbm_to_watts(cfg.circuit_power_dbm);
    return a.repetitions * airtime(a.code, payload_bytes, cfg) * (radiated + circuit);
}

double snr_threshold(int code, const PhyConfig& cfg) {
    check_code(code);
    return cfg.snr_thresholds_db.at(code);
}

double received_power(double p_tx_dbm, double distance_m, double fading_h, const PhyConfig& cfg) {
    if (!(distance_m > 0.0)) throw std::invalid_argument("received_power: distance must be positive");
    if (fading_h < 0.0) throw std::invalid_argument("received_power: negative fading");
    return dbm_to_watts(p_tx_dbm) * fading_h * cfg.path_gain *
           std::pow(distance_m, -cfg.path_loss_exponent);
}

ActionSpace build_action_space(const ActionSpaceConfig& cfg, int payload_bytes,
                               const PhyConfig& phy) {
    if (cfg.powers_dbm.empty() || cfg.codes.empty() || cfg.repetitions.empty() ||
        cfg.subchannels < 1)
        throw std::invalid_argument("action_space: every dimension must be non-empty");
    ActionSpace space;
    for (double p : cfg.powers_dbm)
        for (int h = 0; h < cfg.subchannels; ++h)
            for (int c : cfg.codes)
                for (int m : cfg.repetitions) {
                    check_code(c);
                    if (m < 1) throw std::invalid_argument("action_space: repetitions must be >= 1");
                    Action a{p, h, c, m};
                    space.actions.push_back(a);
                    space.energy_j.push_back(tx_energy(a, payload_bytes, phy));
                }
    space.e_min_j = *std::min_element(space.energy_j.begin(), space.energy_j.end());
    return space;
}

}  // namespace loramab
