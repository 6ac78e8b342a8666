#include "loramab/runner.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "loramab/analytic.hpp"
#include "loramab/metrics.hpp"

namespace loramab {

namespace fs = std::filesystem;

namespace {

int worker_count() {
    if (const char* env = std::getenv("LORAMAB_WORKERS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void write_metrics_csv(const std::string& path, const std::vector<ReplicationResult>& reps) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "# schema: loramab.metrics.v1\n";
    out << "replication,device,packet_index,time_s,power_dbm,subchannel,code,repetitions,"
           "snr_ok,sir_ok,ack,reward,energy_j\n";
    for (const ReplicationResult& rep : reps)
        for (const PacketRecord& p : rep.packets)
            out << rep.replication << ',' << p.device << ',' << p.packet_index << ','
                << fmt(p.t_s) << ',' << fmt(p.action.power_dbm) << ',' << p.action.subchannel
                << ',' << p.action.code << ',' << p.action.repetitions << ',' << int(p.snr_ok)
                << ',' << int(p.sir_ok) << ',' << int(p.ack) << ',' << fmt(p.reward) << ','
                << fmt(p.energy_j) << '\n';
}

void write_occupancy_csv(const std::string& path, const std::vector<ReplicationResult>& reps,
                         const ScenarioConfig& cfg) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "# schema: loramab.occupancy.v1\n";
    out << "replication,bucket_start_s,subchannel,transmissions\n";
    for (const ReplicationResult& rep : reps) {
        const auto rows = occupancy_histogram(rep, cfg.metrics.occupancy_bucket_s,
                                              cfg.action_space.subchannels);
        for (const OccupancyRow& r : rows)
            out << rep.replication << ',' << fmt(r.bucket_start_s) << ',' << r.subchannel << ','
                << r.transmissions << '\n';
    }
}

}  // namespace

std::vector<ReplicationResult> run_replications(const ScenarioConfig& cfg) {
    const int n_reps = cfg.replications;
    std::vector<ReplicationResult> results(static_cast<std::size_t>(n_reps));
    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::string error;
    std::mutex error_mutex;

    const int workers = std::min(worker_count(), n_reps);
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            while (!failed) {
                const int rep = next.fetch_add(1);
                if (rep >= n_reps) break;
                try {
                    results[static_cast<std::size_t>(rep)] = simulate_replication(cfg, rep);
                } catch (const std::exception& e) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    error = e.what();
                    failed = true;
                }
            }
        });
    for (auto& t : pool) t.join();
    if (failed) throw std::runtime_error("replication failed: " + error);
    return results;
}

RunSummary run_command(const ScenarioConfig& cfg, const std::string& out_dir) {
    validate_config(cfg);
    fs::create_directories(out_dir);
    const std::string metrics_path = (fs::path(out_dir) / "metrics.csv").string();
    const std::string occupancy_path = (fs::path(out_dir) / "occupancy.csv").string();
    const std::string summary_path = (fs::path(out_dir) / "summary.json").string();

    try {
        const auto reps = run_replications(cfg);

        RunSummary s;
        s.replications = cfg.replications;
        s.seed = cfg.seed;
        std::vector<double> steady, conv;
        double energy_sum = 0.0, energy_delivered_sum = 0.0;
        for (const ReplicationResult& rep : reps) {
            s.packets_total += static_cast<long>(rep.packets.size());
            const auto series = windowed_success_series(rep, cfg.metrics.success_window);
            steady.push_back(final_quartile_mean(series));
            conv.push_back(static_cast<double>(convergence_index(series)));
            energy_sum += mean_energy_per_packet(rep);
            energy_delivered_sum += mean_energy_per_delivered_packet(rep);
        }
        const double n = static_cast<double>(reps.size());
        double mean = 0.0;
        for (double v : steady) mean += v;
        mean /= n;
        double var = 0.0;
        for (double v : steady) var += (v - mean) * (v - mean);
        s.windowed_success_mean = mean;
        s.windowed_success_stddev = n > 1 ? std::sqrt(var / (n - 1)) : 0.0;
        s.mean_energy_per_packet_j = energy_sum / n;
        s.mean_energy_per_delivered_packet_j = energy_delivered_sum / n;
        double conv_mean = 0.0;
        bool settled = true;
        for (double v : conv) {
            if (v < 0) settled = false;
            conv_mean += v;
        }
        s.convergence_packet_index = settled ? conv_mean / n : -1.0;

        write_metrics_csv(metrics_path, reps);
        write_occupancy_csv(occupancy_path, reps, cfg);
        {
            nlohmann::json j;
            j["schema"] = "loramab.summary.v1";
            j["policy"] = to_string(cfg.policy);
            j["replications"] = s.replications;
            j["seed"] = s.seed;
            j["packets_total"] = s.packets_total;
            j["windowed_success_mean"] = s.windowed_success_mean;
            j["windowed_success_stddev"] = s.windowed_success_stddev;
            j["mean_energy_per_packet_j"] = s.mean_energy_per_packet_j;
            j["mean_energy_per_delivered_packet_j"] = s.mean_energy_per_delivered_packet_j;
            j["convergence_packet_index"] = s.convergence_packet_index;
            std::ofstream out(summary_path, std::ios::binary);
            if (!out) throw std::runtime_error("cannot write " + summary_path);
            out << j.dump(2) << '\n';
        }
        return s;
    } catch (...) {
        std::error_code ec;
        fs::remove(metrics_path, ec);
        fs::remove(occupancy_path, ec);
        fs::remove(summary_path, ec);
        throw;
    }
}

void analytic_command(const ScenarioConfig& cfg, const std::string& out_dir) {
    if (!cfg.analytic)
        throw ConfigError("analytic: config has no 'analytic' section");
    if (cfg.action_space.subchannels != 1)
        throw ConfigError(
            "analytic: restricted to a single subchannel (action_space.subchannels must be 1)");
    if (cfg.action_space.powers_dbm.size() != 1)
        throw ConfigError("analytic: restricted to a single power level");

    const AnalyticConfig& ac = *cfg.analytic;
    AnalyticModel model;
    model.phy = cfg.phy;
    model.p_tx_dbm = cfg.action_space.powers_dbm.front();
    model.radius_m = cfg.deployment.radius_m;
    model.t_rep_s = cfg.deployment.packet_interval_s;
    model.payload_bytes = cfg.payload_bytes;

    const double area = M_PI * model.radius_m * model.radius_m;
    const double lambda = cfg.deployment.density_per_m2
                              ? *cfg.deployment.density_per_m2
                              : static_cast<double>(*cfg.deployment.count) / area;
    const std::vector<double> edges =
        ac.ring_radii ? *ac.ring_radii : uniform_area_edges(model.radius_m, ac.rings);
    const double beta = ac.beta.value_or(cfg.learning.beta);

    // closed-form vs quadrature gate before trusting the fast path
    if (model.phy.path_loss_exponent == 4.0) {
        RingPlan probe = make_ring_plan(model, ac.codes, edges, std::max(lambda, 1e-9));
        for (double z : {model.radius_m * 0.2, model.radius_m * 0.6, model.radius_m}) {
            const double s = db_to_linear(model.phy.sir_threshold_db) *
                             std::pow(z, 4.0) / (model.p_tx_w() * model.phy.path_gain);
            for (std::size_t j = 0; j < probe.rings.size(); ++j) {
                const double ld = probe.density[j][0] * probe.duty[0];
                const double closed = ring_laplace_closed(s, probe.rings[j], ld, model);
                const double quad = ring_laplace(s, probe.rings[j], ld, model);
                if (std::abs(closed - quad) > 1e-9 * std::max(std::abs(quad), 1e-30))
                    throw std::runtime_error(
                        "analytic: closed-form/quadrature cross-check failed");
            }
        }
    }

    const RingPlan plan =
        optimize_ring_densities(model, beta, ac.codes, edges, lambda, ac.grid_step);

    fs::create_directories(out_dir);
    {
        std::ofstream out(fs::path(out_dir) / "ringplan.csv", std::ios::binary);
        if (!out) throw std::runtime_error("cannot write ringplan.csv");
        out << "# schema: loramab.ringplan.v1\n";
        out << "ring,r_inner_m,r_outer_m,code,density_per_m2\n";
        for (std::size_t j = 0; j < plan.rings.size(); ++j)
            for (std::size_t ci = 0; ci < plan.codes.size(); ++ci)
                out << j << ',' << fmt(plan.rings[j].r_inner) << ','
                    << fmt(plan.rings[j].r_outer) << ',' << plan.codes[ci] << ','
                    << fmt(plan.density[j][ci]) << '\n';
    }
    {
        std::ofstream out(fs::path(out_dir) / "ps_table.csv", std::ios::binary);
        if (!out) throw std::runtime_error("cannot write ps_table.csv");
        out << "# schema: loramab.ps_table.v1\n";
        out << "z_m,code,p_s\n";
        for (int i = 1; i <= ac.ps_table_points; ++i) {
            const double z = model.radius_m * static_cast<double>(i) /
                             static_cast<double>(ac.ps_table_points);
            for (int c : plan.codes)
                out << fmt(z) << ',' << c << ',' << fmt(success_probability(c, z, plan, model))
                    << '\n';
        }
    }
}

}  // namespace loramab
