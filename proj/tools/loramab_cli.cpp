#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "loramab/runner.hpp"

using namespace loramab;

int main(int argc, char** argv) {
    CLI::App app{"Grant-free IoT uplink simulator with bandit-learned link parameters"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    std::uint64_t seed = 0;
    int replications = 0;

    auto* run = app.add_subcommand("run", "Simulate a scenario and write metrics");
    run->add_option("--config", config_path, "Scenario JSON file")->required();
    auto* seed_opt = run->add_option("--seed", seed, "Override the scenario seed");
    run->add_option("--out", out_dir, "Output directory")->required();
    run->add_option("--replications", replications, "Override replication count");

    auto* analytic = app.add_subcommand("analytic",
                                        "Optimize ring densities and emit the success table");
    analytic->add_option("--config", config_path, "Scenario JSON file")->required();
    analytic->add_option("--out", out_dir, "Output directory")->required();

    auto* validate = app.add_subcommand("validate", "Check a scenario file");
    validate->add_option("--config", config_path, "Scenario JSON file")->required();

    CLI11_PARSE(app, argc, argv);

    ScenarioConfig cfg;
    try {
        cfg = load_config(config_path);
        if (seed_opt->count() > 0) cfg.seed = seed;
        if (replications > 0) cfg.replications = replications;
        validate_config(cfg);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfigError;
    }

    try {
        if (app.got_subcommand(validate)) {
            std::cout << "ok\n";
            return kExitOk;
        }
        if (app.got_subcommand(run)) {
            const RunSummary s = run_command(cfg, out_dir);
            std::cout << "packets=" << s.packets_total
                      << " windowed_success=" << s.windowed_success_mean
                      << " energy_per_packet_j=" << s.mean_energy_per_packet_j << '\n';
            return kExitOk;
        }
        analytic_command(cfg, out_dir);
        std::cout << "wrote ringplan.csv and ps_table.csv\n";
        return kExitOk;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const std::runtime_error& e) {
        const std::string msg = e.what();
        std::cerr << "error: " << msg << '\n';
        if (msg.find("cross-check") != std::string::npos) return kExitValidationGate;
        return kExitRuntimeError;
    }
}
