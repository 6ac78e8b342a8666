#include "loramab/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace loramab {

using nlohmann::json;

namespace {

const std::set<double> kAllowedPowersDbm = {2.0, 5.0, 8.0, 11.0, 14.0};

void reject_unknown(const json& j, const std::string& scope,
                    std::initializer_list<const char*> known) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : known)
            if (it.key() == k) ok = true;
        if (!ok) throw ConfigError("unknown field '" + scope + it.key() + "'");
    }
}

template <typename T>
void get_if_present(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).template get<T>();
}

template <typename T>
void get_optional(const json& j, const char* key, std::optional<T>& out) {
    if (j.contains(key)) out = j.at(key).template get<T>();
}

PhyConfig parse_phy(const json& j) {
    PhyConfig phy;
    reject_unknown(j, "phy.",
                   {"bandwidth_hz", "code_rate", "snr_thresholds_db", "sir_threshold_db",
                    "path_loss_exponent", "path_gain", "noise_psd_dbm_hz", "noise_figure_db",
                    "pa_multiplier", "circuit_power_dbm"});
    get_if_present(j, "bandwidth_hz", phy.bandwidth_hz);
    get_if_present(j, "code_rate", phy.code_rate);
    get_if_present(j, "sir_threshold_db", phy.sir_threshold_db);
    get_if_present(j, "path_loss_exponent", phy.path_loss_exponent);
    get_if_present(j, "path_gain", phy.path_gain);
    get_if_present(j, "noise_psd_dbm_hz", phy.noise_psd_dbm_hz);
    get_if_present(j, "noise_figure_db", phy.noise_figure_db);
    get_if_present(j, "pa_multiplier", phy.pa_multiplier);
    get_if_present(j, "circuit_power_dbm", phy.circuit_power_dbm);
    if (j.contains("snr_thresholds_db")) {
        phy.snr_thresholds_db.clear();
        for (auto it = j.at("snr_thresholds_db").begin(); it != j.at("snr_thresholds_db").end();
             ++it)
            phy.snr_thresholds_db[std::stoi(it.key())] = it.value().get<double>();
    }
    return phy;
}

JamMode jam_mode_from_string(const std::string& s) {
    if (s == "data") return JamMode::Data;
    if (s == "feedback") return JamMode::Feedback;
    if (s == "both") return JamMode::Both;
    throw ConfigError("jamming.mode must be one of data|feedback|both, got '" + s + "'");
}

std::string to_string(JamMode m) {
    switch (m) {
        case JamMode::Data: return "data";
        case JamMode::Feedback: return "feedback";
        default: return "both";
    }
}

}  // namespace

std::string to_string(Policy p) {
    switch (p) {
        case Policy::Ucb1: return "ucb1";
        case Policy::Exp3: return "exp3";
        case Policy::EqualSplit: return "equal_split";
        case Policy::Random: return "random";
        default: return "ucb1_no_energy";
    }
}

Policy policy_from_string(const std::string& s) {
    if (s == "ucb1") return Policy::Ucb1;
    if (s == "exp3") return Policy::Exp3;
    if (s == "equal_split") return Policy::EqualSplit;
    if (s == "random") return Policy::Random;
    if (s == "ucb1_no_energy") return Policy::Ucb1NoEnergy;
    throw ConfigError("policy must be ucb1|exp3|equal_split|random|ucb1_no_energy, got '" + s +
                      "'");
}

ScenarioConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config root must be a JSON object");
    reject_unknown(j, "",
                   {"phy", "deployment", "action_space", "policy", "learning", "jamming",
                    "horizon", "payload_bytes", "replications", "seed", "metrics", "analytic"});

    ScenarioConfig cfg;
    if (j.contains("phy")) cfg.phy = parse_phy(j.at("phy"));

    if (!j.contains("deployment")) throw ConfigError("missing required field 'deployment'");
    {
        const json& d = j.at("deployment");
        reject_unknown(d, "deployment.",
                       {"radius_m", "count", "density_per_m2", "packet_interval_s"});
        if (!d.contains("radius_m")) throw ConfigError("missing required field 'deployment.radius_m'");
        cfg.deployment.radius_m = d.at("radius_m").get<double>();
        get_optional(d, "count", cfg.deployment.count);
        get_optional(d, "density_per_m2", cfg.deployment.density_per_m2);
        get_if_present(d, "packet_interval_s", cfg.deployment.packet_interval_s);
    }

    if (j.contains("action_space")) {
        const json& a = j.at("action_space");
        reject_unknown(a, "action_space.", {"powers_dbm", "subchannels", "codes", "repetitions"});
        get_if_present(a, "powers_dbm", cfg.action_space.powers_dbm);
        get_if_present(a, "subchannels", cfg.action_space.subchannels);
        get_if_present(a, "codes", cfg.action_space.codes);
        get_if_present(a, "repetitions", cfg.action_space.repetitions);
    }

    if (j.contains("policy")) cfg.policy = policy_from_string(j.at("policy").get<std::string>());

    if (j.contains("learning")) {
        const json& l = j.at("learning");
        reject_unknown(l, "learning.",
                       {"alpha", "beta", "rho", "literal_eq3", "literal_index", "transfer_prior",
                        "transfer_pseudo_count"});
        get_if_present(l, "alpha", cfg.learning.alpha);
        get_if_present(l, "beta", cfg.learning.beta);
        get_if_present(l, "rho", cfg.learning.rho);
        get_if_present(l, "literal_eq3", cfg.learning.literal_eq3);
        get_if_present(l, "literal_index", cfg.learning.literal_index);
        get_optional(l, "transfer_prior", cfg.learning.transfer_prior);
        get_if_present(l, "transfer_pseudo_count", cfg.learning.transfer_pseudo_count);
    }

    if (j.contains("jamming")) {
        for (const json& e : j.at("jamming")) {
            reject_unknown(e, "jamming[].",
                           {"subchannel", "t_start_s", "t_end_s", "mode", "power_dbm",
                            "drop_prob"});
            JamEntry entry;
            entry.subchannel = e.at("subchannel").get<int>();
            entry.t_start_s = e.at("t_start_s").get<double>();
            entry.t_end_s = e.at("t_end_s").get<double>();
            entry.mode = jam_mode_from_string(e.at("mode").get<std::string>());
            get_if_present(e, "power_dbm", entry.power_dbm);
            get_if_present(e, "drop_prob", entry.drop_prob);
            cfg.jamming.push_back(entry);
        }
    }

    if (!j.contains("horizon")) throw ConfigError("missing required field 'horizon'");
    {
        const json& h = j.at("horizon");
        reject_unknown(h, "horizon.", {"packets_per_device", "seconds"});
        get_optional(h, "packets_per_device", cfg.horizon.packets_per_device);
        get_optional(h, "seconds", cfg.horizon.seconds);
    }

    get_if_present(j, "payload_bytes", cfg.payload_bytes);
    get_if_present(j, "replications", cfg.replications);
    get_if_present(j, "seed", cfg.seed);

    if (j.contains("metrics")) {
        const json& m = j.at("metrics");
        reject_unknown(m, "metrics.", {"success_window", "occupancy_bucket_s"});
        get_if_present(m, "success_window", cfg.metrics.success_window);
        get_if_present(m, "occupancy_bucket_s", cfg.metrics.occupancy_bucket_s);
    }

    if (j.contains("analytic")) {
        const json& a = j.at("analytic");
        reject_unknown(a, "analytic.",
                       {"codes", "rings", "beta", "ring_radii", "grid_step", "ps_table_points"});
        AnalyticConfig ac;
        get_if_present(a, "codes", ac.codes);
        get_if_present(a, "rings", ac.rings);
        get_optional(a, "beta", ac.beta);
        get_optional(a, "ring_radii", ac.ring_radii);
        get_if_present(a, "grid_step", ac.grid_step);
        get_if_present(a, "ps_table_points", ac.ps_table_points);
        cfg.analytic = ac;
    }

    validate_config(cfg);
    return cfg;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

void validate_config(const ScenarioConfig& cfg) {
    try {
        cfg.phy.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }

    if (!(cfg.deployment.radius_m > 0.0))
        throw ConfigError("deployment.radius_m must be positive");
    if (cfg.deployment.count.has_value() == cfg.deployment.density_per_m2.has_value())
        throw ConfigError("deployment: exactly one of count, density_per_m2 is required");
    if (cfg.deployment.count && *cfg.deployment.count < 0)
        throw ConfigError("deployment.count must be >= 0");
    if (cfg.deployment.density_per_m2 && !(*cfg.deployment.density_per_m2 >= 0.0))
        throw ConfigError("deployment.density_per_m2 must be >= 0");
    if (!(cfg.deployment.packet_interval_s > 0.0))
        throw ConfigError("deployment.packet_interval_s must be positive");

    if (cfg.action_space.powers_dbm.empty()) throw ConfigError("action_space.powers_dbm is empty");
    for (double p : cfg.action_space.powers_dbm)
        if (!kAllowedPowersDbm.count(p))
            throw ConfigError("action_space.powers_dbm: " + std::to_string(p) +
                              " dBm is outside the supported set {2,5,8,11,14}");
    if (cfg.action_space.subchannels < 1)
        throw ConfigError("action_space.subchannels must be >= 1");
    if (cfg.action_space.codes.empty()) throw ConfigError("action_space.codes is empty");
    for (int c : cfg.action_space.codes)
        if (c < 7 || c > 12) throw ConfigError("action_space.codes: code must be in 7..12");
    if (cfg.action_space.repetitions.empty())
        throw ConfigError("action_space.repetitions is empty");
    for (int m : cfg.action_space.repetitions)
        if (m < 1) throw ConfigError("action_space.repetitions: entries must be >= 1");

    if (cfg.learning.alpha < 0.0) throw ConfigError("learning.alpha must be >= 0");
    if (cfg.learning.beta < 0.0 || cfg.learning.beta > 1.0)
        throw ConfigError("learning.beta must be in [0,1]");
    if (!(cfg.learning.rho > 0.0) || cfg.learning.rho > 1.0)
        throw ConfigError("learning.rho must be in (0,1]");
    if (cfg.learning.transfer_pseudo_count < 1)
        throw ConfigError("learning.transfer_pseudo_count must be >= 1");
    if (cfg.learning.transfer_prior) {
        const std::size_t expected = cfg.action_space.powers_dbm.size() *
                                     cfg.action_space.subchannels * cfg.action_space.codes.size() *
                                     cfg.action_space.repetitions.size();
        if (cfg.learning.transfer_prior->size() != expected)
            throw ConfigError("learning.transfer_prior: size does not match the action space");
        for (double v : *cfg.learning.transfer_prior)
            if (v < 0.0 || v > 1.0)
                throw ConfigError("learning.transfer_prior: entries must be in [0,1]");
    }

    for (const JamEntry& e : cfg.jamming) {
        if (e.subchannel < 0 || e.subchannel >= cfg.action_space.subchannels)
            throw ConfigError("jamming.subchannel out of range");
        if (!(e.t_start_s < e.t_end_s)) throw ConfigError("jamming: t_start_s must precede t_end_s");
        if (e.drop_prob < 0.0 || e.drop_prob > 1.0)
            throw ConfigError("jamming.drop_prob must be in [0,1]");
    }

    if (cfg.horizon.packets_per_device.has_value() == cfg.horizon.seconds.has_value())
        throw ConfigError("horizon: exactly one of packets_per_device, seconds is required");
    if (cfg.horizon.packets_per_device && *cfg.horizon.packets_per_device < 1)
        throw ConfigError("horizon.packets_per_device must be >= 1");
    if (cfg.horizon.seconds && !(*cfg.horizon.seconds > 0.0))
        throw ConfigError("horizon.seconds must be positive");

    if (cfg.payload_bytes < 1) throw ConfigError("payload_bytes must be >= 1");
    if (cfg.replications < 1) throw ConfigError("replications must be >= 1");
    if (cfg.metrics.success_window < 1) throw ConfigError("metrics.success_window must be >= 1");
    if (!(cfg.metrics.occupancy_bucket_s > 0.0))
        throw ConfigError("metrics.occupancy_bucket_s must be positive");

    if (cfg.analytic) {
        const AnalyticConfig& a = *cfg.analytic;
        if (a.codes.empty()) throw ConfigError("analytic.codes is empty");
        for (int c : a.codes)
            if (c < 7 || c > 12) throw ConfigError("analytic.codes: code must be in 7..12");
        if (a.rings < 1) throw ConfigError("analytic.rings must be >= 1");
        if (a.beta && (*a.beta < 0.0 || *a.beta > 1.0))
            throw ConfigError("analytic.beta must be in [0,1]");
        if (a.ring_radii) {
            if (static_cast<int>(a.ring_radii->size()) != a.rings + 1)
                throw ConfigError("analytic.ring_radii must have rings+1 entries");
            for (std::size_t i = 1; i < a.ring_radii->size(); ++i)
                if (!((*a.ring_radii)[i] > (*a.ring_radii)[i - 1]))
                    throw ConfigError("analytic.ring_radii must be strictly increasing");
        }
        if (!(a.grid_step > 0.0) || a.grid_step > 0.5)
            throw ConfigError("analytic.grid_step must be in (0,0.5]");
        if (a.ps_table_points < 2) throw ConfigError("analytic.ps_table_points must be >= 2");
    }
}

std::string serialize_config(const ScenarioConfig& cfg) {
    json j;
    json& phy = j["phy"];
    phy["bandwidth_hz"] = cfg.phy.bandwidth_hz;
    phy["code_rate"] = cfg.phy.code_rate;
    for (const auto& [c, v] : cfg.phy.snr_thresholds_db)
        phy["snr_thresholds_db"][std::to_string(c)] = v;
    phy["sir_threshold_db"] = cfg.phy.sir_threshold_db;
    phy["path_loss_exponent"] = cfg.phy.path_loss_exponent;
    phy["path_gain"] = cfg.phy.path_gain;
    phy["noise_psd_dbm_hz"] = cfg.phy.noise_psd_dbm_hz;
    phy["noise_figure_db"] = cfg.phy.noise_figure_db;
    phy["pa_multiplier"] = cfg.phy.pa_multiplier;
    phy["circuit_power_dbm"] = cfg.phy.circuit_power_dbm;

    json& d = j["deployment"];
    d["radius_m"] = cfg.deployment.radius_m;
    if (cfg.deployment.count) d["count"] = *cfg.deployment.count;
    if (cfg.deployment.density_per_m2) d["density_per_m2"] = *cfg.deployment.density_per_m2;
    d["packet_interval_s"] = cfg.deployment.packet_interval_s;

    json& a = j["action_space"];
    a["powers_dbm"] = cfg.action_space.powers_dbm;
    a["subchannels"] = cfg.action_space.subchannels;
    a["codes"] = cfg.action_space.codes;
    a["repetitions"] = cfg.action_space.repetitions;

    j["policy"] = to_string(cfg.policy);

    json& l = j["learning"];
    l["alpha"] = cfg.learning.alpha;
    l["beta"] = cfg.learning.beta;
    l["rho"] = cfg.learning.rho;
    l["literal_eq3"] = cfg.learning.literal_eq3;
    l["literal_index"] = cfg.learning.literal_index;
    if (cfg.learning.transfer_prior) l["transfer_prior"] = *cfg.learning.transfer_prior;
    l["transfer_pseudo_count"] = cfg.learning.transfer_pseudo_count;

    j["jamming"] = json::array();
    for (const JamEntry& e : cfg.jamming) {
        json je;
        je["subchannel"] = e.subchannel;
        je["t_start_s"] = e.t_start_s;
        je["t_end_s"] = e.t_end_s;
        je["mode"] = to_string(e.mode);
        je["power_dbm"] = e.power_dbm;
        je["drop_prob"] = e.drop_prob;
        j["jamming"].push_back(je);
    }

    json& h = j["horizon"];
    if (cfg.horizon.packets_per_device) h["packets_per_device"] = *cfg.horizon.packets_per_device;
    if (cfg.horizon.seconds) h["seconds"] = *cfg.horizon.seconds;

    j["payload_bytes"] = cfg.payload_bytes;
    j["replications"] = cfg.replications;
    j["seed"] = cfg.seed;

    json& m = j["metrics"];
    m["success_window"] = cfg.metrics.success_window;
    m["occupancy_bucket_s"] = cfg.metrics.occupancy_bucket_s;

    if (cfg.analytic) {
        json& an = j["analytic"];
        an["codes"] = cfg.analytic->codes;
        an["rings"] = cfg.analytic->rings;
        if (cfg.analytic->beta) an["beta"] = *cfg.analytic->beta;
        if (cfg.analytic->ring_radii) an["ring_radii"] = *cfg.analytic->ring_radii;
        an["grid_step"] = cfg.analytic->grid_step;
        an["ps_table_points"] = cfg.analytic->ps_table_points;
    }

    return j.dump(2);
}

}  // namespace loramab
