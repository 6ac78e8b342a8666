#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <random>
#include <span>

#include "loramab/analytic.hpp"
#include "loramab/bandit.hpp"
#include "loramab/config.hpp"
#include "loramab/phy.hpp"
#include "loramab/runner.hpp"
#include "loramab/sim.hpp"

namespace py = pybind11;
using namespace loramab;

namespace {

/// Deterministic RNG stream handle mirroring the simulator's seeding scheme.
struct RngHandle {
    std::mt19937_64 rng;
    RngHandle(std::uint64_t seed, int replication) : rng(make_rng(seed, replication)) {}
};

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Grant-free uplink simulator core: PHY model, bandit learners, "
              "event-driven simulation and the centralized analytic baseline.";

    py::register_exception<ConfigError>(m, "ConfigError");

    // ---- config ----------------------------------------------------------
    py::class_<ScenarioConfig>(m, "ScenarioConfig")
        .def_property(
            "policy", [](const ScenarioConfig& c) { return to_string(c.policy); },
            [](ScenarioConfig& c, const std::string& s) { c.policy = policy_from_string(s); })
        .def_readwrite("seed", &ScenarioConfig::seed)
        .def_readwrite("replications", &ScenarioConfig::replications)
        .def_readwrite("payload_bytes", &ScenarioConfig::payload_bytes)
        .def("to_json", [](const ScenarioConfig& c) { return serialize_config(c); })
        .def("__repr__", [](const ScenarioConfig& c) {
            return "ScenarioConfig(policy=" + to_string(c.policy) + ")";
        });

    m.def("parse_config", &parse_config, py::arg("json_text"),
          "Parse and validate a scenario from a JSON string; unknown fields are rejected.");
    m.def("load_config", &load_config, py::arg("path"));
    m.def("serialize_config", &serialize_config, py::arg("config"));
    m.def("validate_config", &validate_config, py::arg("config"));

    // ---- phy -------------------------------------------------------------
    py::class_<PhyConfig>(m, "PhyConfig")
        .def(py::init<>())
        .def_readwrite("bandwidth_hz", &PhyConfig::bandwidth_hz)
        .def_readwrite("code_rate", &PhyConfig::code_rate)
        .def_readwrite("sir_threshold_db", &PhyConfig::sir_threshold_db)
        .def_readwrite("path_loss_exponent", &PhyConfig::path_loss_exponent)
        .def_readwrite("path_gain", &PhyConfig::path_gain)
        .def_readwrite("noise_psd_dbm_hz", &PhyConfig::noise_psd_dbm_hz)
        .def_readwrite("noise_figure_db", &PhyConfig::noise_figure_db)
        .def_readwrite("pa_multiplier", &PhyConfig::pa_multiplier)
        .def_readwrite("circuit_power_dbm", &PhyConfig::circuit_power_dbm)
        .def("noise_power_w", &PhyConfig::noise_power_w);

    py::class_<Action>(m, "Action")
        .def(py::init<>())
        .def_readwrite("power_dbm", &Action::power_dbm)
        .def_readwrite("subchannel", &Action::subchannel)
        .def_readwrite("code", &Action::code)
        .def_readwrite("repetitions", &Action::repetitions);

    m.def("data_rate", &data_rate, py::arg("code"), py::arg("phy"));
    m.def("airtime", &airtime, py::arg("code"), py::arg("payload_bytes"), py::arg("phy"));
    m.def("tx_energy", &tx_energy, py::arg("action"), py::arg("payload_bytes"), py::arg("phy"));
    m.def("snr_threshold", &snr_threshold, py::arg("code"), py::arg("phy"));
    m.def("received_power", &received_power, py::arg("p_tx_dbm"), py::arg("distance_m"),
          py::arg("fading_h"), py::arg("phy"));

    // ---- learners --------------------------------------------------------
    m.def("shaped_reward", &shaped_reward, py::arg("ack"), py::arg("e_k"), py::arg("e_min"),
          py::arg("beta"), py::arg("literal_eq3") = false);

    py::class_<RngHandle>(m, "Rng")
        .def(py::init<std::uint64_t, int>(), py::arg("seed"), py::arg("replication") = 0);

    py::class_<Ucb1>(m, "Ucb1")
        .def(py::init<std::size_t, double, bool>(), py::arg("n_actions"), py::arg("alpha"),
             py::arg("literal_index") = false)
        .def_static(
            "with_prior",
            [](std::size_t n, double alpha, const std::vector<double>& prior, long pseudo,
               bool literal) { return Ucb1::with_prior(n, alpha, prior, pseudo, literal); },
            py::arg("n_actions"), py::arg("alpha"), py::arg("prior"), py::arg("pseudo_count"),
            py::arg("literal_index") = false)
        .def("select", &Ucb1::select)
        .def("update", &Ucb1::update, py::arg("k"), py::arg("reward"))
        .def("index", &Ucb1::index, py::arg("k"))
        .def("mean", &Ucb1::mean, py::arg("k"))
        .def("visits", &Ucb1::visits, py::arg("k"))
        .def_property_readonly("t", &Ucb1::t)
        .def("__len__", &Ucb1::size);

    py::class_<Exp3>(m, "Exp3")
        .def(py::init<std::size_t, double>(), py::arg("n_actions"), py::arg("rho"))
        .def_static(
            "with_prior",
            [](std::size_t n, double rho, const std::vector<double>& prior) {
                return Exp3::with_prior(n, rho, prior);
            },
            py::arg("n_actions"), py::arg("rho"), py::arg("prior"))
        .def("distribution", &Exp3::distribution)
        .def("sample", [](const Exp3& e, RngHandle& r) { return e.sample(r.rng); },
             py::arg("rng"))
        .def("update", &Exp3::update, py::arg("k"), py::arg("reward"), py::arg("p_k"))
        .def("weight", &Exp3::weight, py::arg("k"))
        .def("__len__", &Exp3::size);

    // ---- simulation ------------------------------------------------------
    py::class_<PacketRecord>(m, "PacketRecord")
        .def_readonly("device", &PacketRecord::device)
        .def_readonly("packet_index", &PacketRecord::packet_index)
        .def_readonly("t_s", &PacketRecord::t_s)
        .def_readonly("action", &PacketRecord::action)
        .def_readonly("snr_ok", &PacketRecord::snr_ok)
        .def_readonly("sir_ok", &PacketRecord::sir_ok)
        .def_readonly("data_ok", &PacketRecord::data_ok)
        .def_readonly("ack", &PacketRecord::ack)
        .def_readonly("reward", &PacketRecord::reward)
        .def_readonly("energy_j", &PacketRecord::energy_j);

    py::class_<ReplicationResult>(m, "ReplicationResult")
        .def_readonly("replication", &ReplicationResult::replication)
        .def_readonly("packets", &ReplicationResult::packets)
        .def_readonly("transmission_records", &ReplicationResult::transmission_records);

    m.def(
        "simulate_replication",
        [](const ScenarioConfig& cfg, int replication) {
            return simulate_replication(cfg, replication);
        },
        py::arg("config"), py::arg("replication") = 0,
        py::call_guard<py::gil_scoped_release>());

    m.def(
        "run",
        [](const ScenarioConfig& cfg, const std::string& out_dir) {
            RunSummary s;
            {
                py::gil_scoped_release release;
                s = run_command(cfg, out_dir);
            }
            py::dict d;
            d["replications"] = s.replications;
            d["seed"] = s.seed;
            d["packets_total"] = s.packets_total;
            d["windowed_success_mean"] = s.windowed_success_mean;
            d["windowed_success_stddev"] = s.windowed_success_stddev;
            d["mean_energy_per_packet_j"] = s.mean_energy_per_packet_j;
            d["mean_energy_per_delivered_packet_j"] = s.mean_energy_per_delivered_packet_j;
            d["convergence_packet_index"] = s.convergence_packet_index;
            return d;
        },
        py::arg("config"), py::arg("out_dir"),
        "Run all replications and write metrics.csv, occupancy.csv and summary.json.");

    m.def("run_analytic", &analytic_command, py::arg("config"), py::arg("out_dir"),
          py::call_guard<py::gil_scoped_release>(),
          "Optimize ring densities and write ringplan.csv plus ps_table.csv.");

    // ---- analytic baseline ----------------------------------------------
    py::class_<Ring>(m, "Ring")
        .def(py::init([](double r_inner, double r_outer) {
                 return Ring{r_inner, r_outer};
             }),
             py::arg("r_inner"), py::arg("r_outer"))
        .def_readwrite("r_inner", &Ring::r_inner)
        .def_readwrite("r_outer", &Ring::r_outer);

    py::class_<AnalyticModel>(m, "AnalyticModel")
        .def(py::init<>())
        .def_readwrite("phy", &AnalyticModel::phy)
        .def_readwrite("p_tx_dbm", &AnalyticModel::p_tx_dbm)
        .def_readwrite("radius_m", &AnalyticModel::radius_m)
        .def_readwrite("t_rep_s", &AnalyticModel::t_rep_s)
        .def_readwrite("payload_bytes", &AnalyticModel::payload_bytes);

    py::class_<RingPlan>(m, "RingPlan")
        .def_readonly("rings", &RingPlan::rings)
        .def_readonly("codes", &RingPlan::codes)
        .def_readonly("density", &RingPlan::density)
        .def_readonly("lambda_", &RingPlan::lambda)
        .def_readonly("duty", &RingPlan::duty);

    m.def("uniform_area_edges", &uniform_area_edges, py::arg("radius_m"), py::arg("rings"));
    m.def("make_ring_plan", &make_ring_plan, py::arg("model"), py::arg("codes"),
          py::arg("ring_edges"), py::arg("lambda_"));
    m.def("ring_laplace", &ring_laplace, py::arg("s"), py::arg("ring"), py::arg("lambda_duty"),
          py::arg("model"));
    m.def("ring_laplace_closed", &ring_laplace_closed, py::arg("s"), py::arg("ring"),
          py::arg("lambda_duty"), py::arg("model"));
    m.def("success_probability", &success_probability, py::arg("code"), py::arg("z"),
          py::arg("plan"), py::arg("model"), py::arg("force_quadrature") = false);
    m.def("noise_only_success", &noise_only_success, py::arg("code"), py::arg("z"),
          py::arg("model"));
    m.def("ring_plan_objective", &ring_plan_objective, py::arg("plan"), py::arg("model"),
          py::arg("beta"));
    m.def("optimize_ring_densities", &optimize_ring_densities, py::arg("model"), py::arg("beta"),
          py::arg("codes"), py::arg("ring_edges"), py::arg("lambda_"),
          py::arg("grid_step") = 0.01, py::call_guard<py::gil_scoped_release>());
}
