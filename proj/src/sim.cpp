#include "loramab/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

#include "loramab/bandit.hpp"

namespace loramab {

std::mt19937_64 make_rng(std::uint64_t seed, int replication) {
    const std::uint64_t words[] = {seed,
                                   static_cast<std::uint64_t>(replication) + 0x9e3779b97f4a7c15ULL};
    std::seed_seq seq(std::begin(words), std::end(words));
    return std::mt19937_64(seq);
}

Deployment deploy_ppp(double radius_m, std::optional<double> density_per_m2,
                      std::optional<int> count, double packet_interval_s, std::mt19937_64& rng) {
    if (!(radius_m > 0.0)) throw std::invalid_argument("deploy_ppp: radius must be positive");
    std::size_t n;
    if (count) {
        n = static_cast<std::size_t>(*count);
    } else if (density_per_m2) {
        const double mean = *density_per_m2 * M_PI * radius_m * radius_m;
        n = std::poisson_distribution<std::size_t>(mean)(rng);
    } else {
        throw std::invalid_argument("deploy_ppp: need density or count");
    }
    Deployment dep;
    dep.radius_m = radius_m;
    dep.positions.reserve(n);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = radius_m * std::sqrt(uni(rng));
        const double phi = 2.0 * M_PI * uni(rng);
        dep.positions.push_back({r * std::cos(phi), r * std::sin(phi)});
    }
    dep.packet_interval_s.assign(n, packet_interval_s);
    return dep;
}

double jam_power_w(int subchannel, double t0, double t1, std::span<const JamEntry> jamming) {
    double w = 0.0;
    for (const JamEntry& e : jamming) {
        if (e.subchannel != subchannel) continue;
        if (e.mode == JamMode::Feedback) continue;
        if (e.t_start_s < t1 && t0 < e.t_end_s) w += dbm_to_watts(e.power_dbm);
    }
    return w;
}

bool snr_ok(double signal_w, int code, const PhyConfig& cfg) {
    return signal_w >= db_to_linear(snr_threshold(code, cfg)) * cfg.noise_power_w();
}

bool sir_ok(double signal_w, double interference_w, const PhyConfig& cfg) {
    if (interference_w <= 0.0) return true;
    return signal_w >= db_to_linear(cfg.sir_threshold_db) * interference_w;
}

TransmissionRecord resolve_transmission(const CandidateTx& tx,
                                        std::span<const CandidateTx> concurrent,
                                        std::span<const JamEntry> jamming, const PhyConfig& cfg) {
    double interference = jam_power_w(tx.subchannel, tx.t_start_s, tx.t_end_s(), jamming);
    for (const CandidateTx& other : concurrent) {
        if (other.subchannel != tx.subchannel) continue;
        if (other.code != tx.code) continue;  // CSS separates spreading factors
        interference += other.signal_w;
    }
    TransmissionRecord rec;
    rec.device = tx.device;
    rec.t_start_s = tx.t_start_s;
    rec.airtime_s = tx.airtime_s;
    rec.subchannel = tx.subchannel;
    rec.code = tx.code;
    rec.snr_ok = snr_ok(tx.signal_w, tx.code, cfg);
    rec.sir_ok = sir_ok(tx.signal_w, interference, cfg);
    return rec;
}

bool deliver_ack(bool data_ok, int subchannel, double t_s, std::span<const JamEntry> jamming,
                 std::mt19937_64& rng) {
    if (!data_ok) return false;
    for (const JamEntry& e : jamming) {
        if (e.subchannel != subchannel || e.mode == JamMode::Data) continue;
        if (t_s < e.t_start_s || t_s >= e.t_end_s) continue;
        if (std::uniform_real_distribution<double>(0.0, 1.0)(rng) < e.drop_prob) return false;
    }
    return true;
}

std::vector<Action> equal_split_assignment(const Deployment& dep, const ActionSpaceConfig& space,
                                           int payload_bytes, const PhyConfig& phy) {
    const std::size_t n = dep.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double da = dep.distance(a), db = dep.distance(b);
        if (da != db) return da < db;
        return a < b;
    });

    std::vector<int> codes = space.codes;
    std::sort(codes.begin(), codes.end());
    std::vector<double> code_airtime(codes.size());
    for (std::size_t i = 0; i < codes.size(); ++i)
        code_airtime[i] = airtime(codes[i], payload_bytes, phy);

    const int rep = space.repetitions.front();
    std::vector<Action> assignment(n);
    std::vector<double> load(codes.size(), 0.0);
    for (std::size_t rank = 0; rank < n; ++rank) {
        // next device goes to the code with least accumulated airtime load;
        // ties resolve to the smallest code so the nearest device gets c=7
        std::size_t best = 0;
        for (std::size_t c = 1; c < codes.size(); ++c)
            if (load[c] < load[best]) best = c;
        load[best] += code_airtime[best];
        assignment[order[rank]] = Action{14.0, static_cast<int>(rank % space.subchannels),
                                         codes[best], rep};
    }
    return assignment;
}

namespace {

struct Event {
    double time;
    long seq;       // deterministic tie-break
    int type;       // 0 arrival, 1 tx start, 2 tx end
    int device;
    int tx_id;
};

struct EventOrder {
    bool operator()(const Event& a, const Event& b) const {
        if (a.time != b.time) return a.time > b.time;
        // Ends clear the channel before coincident starts; zero-length
        // boundary contact (back-to-back replicas) is not an overlap.
        if (a.type != b.type) return a.type < b.type;
        return a.seq > b.seq;
    }
};

struct InFlightTx {
    int device;
    double t_start_s;
    double airtime_s;
    int subchannel;
    int code;
    double signal_w = 0.0;
    double interference_w = 0.0;
    bool done = false;
};

struct DeviceState {
    std::optional<Ucb1> ucb;
    std::optional<Exp3> exp3;
    double exp3_p = 0.0;      // probability of the in-flight action
    std::size_t action_index = 0;
    Action fixed_action;      // equal_split

    bool busy = false;
    int pending = 0;
    long arrivals_generated = 0;
    std::int32_t packets_done = 0;

    // current packet
    Action cur_action;
    double cur_energy_j = 0.0;
    double cur_t0 = 0.0;
    int replicas_left = 0;
    bool any_snr = false, any_sir = false, any_ok = false;
};

}  // namespace

ReplicationResult simulate_replication(const ScenarioConfig& cfg, int replication) {
    auto rng = make_rng(cfg.seed, replication);
    Deployment dep = deploy_ppp(cfg.deployment.radius_m, cfg.deployment.density_per_m2,
                                cfg.deployment.count, cfg.deployment.packet_interval_s, rng);
    return simulate_replication(cfg, dep, rng, replication);
}

ReplicationResult simulate_replication(const ScenarioConfig& cfg, const Deployment& dep,
                                       std::mt19937_64& rng, int replication) {
    const PhyConfig& phy = cfg.phy;
    const ActionSpace space = build_action_space(cfg.action_space, cfg.payload_bytes, phy);
    const int n_codes = static_cast<int>(cfg.action_space.codes.size());
    const int n_reps = static_cast<int>(cfg.action_space.repetitions.size());
    const std::size_t n = dep.size();

    ReplicationResult out;
    out.replication = replication;
    out.deployment = dep;
    if (n == 0) return out;

    const double beta = (cfg.policy == Policy::Ucb1NoEnergy) ? 0.0 : cfg.learning.beta;
    const bool learning =
        cfg.policy == Policy::Ucb1 || cfg.policy == Policy::Ucb1NoEnergy ||
        cfg.policy == Policy::Exp3;

    std::vector<DeviceState> devices(n);
    std::vector<Action> split;
    if (cfg.policy == Policy::EqualSplit)
        split = equal_split_assignment(dep, cfg.action_space, cfg.payload_bytes, phy);
    for (std::size_t i = 0; i < n; ++i) {
        DeviceState& d = devices[i];
        if (cfg.policy == Policy::Ucb1 || cfg.policy == Policy::Ucb1NoEnergy) {
            if (cfg.learning.transfer_prior)
                d.ucb = Ucb1::with_prior(space.size(), cfg.learning.alpha,
                                         *cfg.learning.transfer_prior,
                                         cfg.learning.transfer_pseudo_count,
                                         cfg.learning.literal_index);
            else
                d.ucb = Ucb1(space.size(), cfg.learning.alpha, cfg.learning.literal_index);
        } else if (cfg.policy == Policy::Exp3) {
            if (cfg.learning.transfer_prior)
                d.exp3 = Exp3::with_prior(space.size(), cfg.learning.rho,
                                          *cfg.learning.transfer_prior);
            else
                d.exp3 = Exp3(space.size(), cfg.learning.rho);
        } else if (cfg.policy == Policy::EqualSplit) {
            d.fixed_action = split[i];
        }
    }

    std::priority_queue<Event, std::vector<Event>, EventOrder> queue;
    long seq = 0;
    std::vector<InFlightTx> txs;
    // active transmission ids keyed by (subchannel, code-7)
    std::vector<std::vector<int>> active(
        static_cast<std::size_t>(cfg.action_space.subchannels) * 6);
    const auto key = [](int subchannel, int code) {
        return static_cast<std::size_t>(subchannel) * 6 + static_cast<std::size_t>(code - 7);
    };

    std::exponential_distribution<double> expo;
    std::uniform_int_distribution<int> uni_sub(0, cfg.action_space.subchannels - 1);

    const auto schedule_arrival = [&](std::size_t dev, double now) {
        DeviceState& d = devices[dev];
        if (cfg.horizon.packets_per_device &&
            d.arrivals_generated >= *cfg.horizon.packets_per_device)
            return;
        const double dt =
            std::exponential_distribution<double>(1.0 / dep.packet_interval_s[dev])(rng);
        const double t = now + dt;
        if (cfg.horizon.seconds && t > *cfg.horizon.seconds) return;
        d.arrivals_generated += 1;
        queue.push(Event{t, seq++, 0, static_cast<int>(dev), -1});
    };

    const auto start_packet = [&](std::size_t dev, double t) {
        DeviceState& d = devices[dev];
        Action a;
        if (cfg.policy == Policy::Ucb1 || cfg.policy == Policy::Ucb1NoEnergy) {
            d.action_index = d.ucb->select();
            a = space.actions[d.action_index];
            d.cur_energy_j = space.energy_j[d.action_index];
        } else if (cfg.policy == Policy::Exp3) {
            const auto dist = d.exp3->distribution();
            d.action_index = sample_index(dist, rng);
            d.exp3_p = dist[d.action_index];
            a = space.actions[d.action_index];
            d.cur_energy_j = space.energy_j[d.action_index];
        } else if (cfg.policy == Policy::Random) {
            a = Action{cfg.action_space.powers_dbm.front(), uni_sub(rng),
                       cfg.action_space.codes.front(), cfg.action_space.repetitions.front()};
            d.action_index = static_cast<std::size_t>(a.subchannel) *
                             static_cast<std::size_t>(n_codes) *
                             static_cast<std::size_t>(n_reps);
            d.cur_energy_j = space.energy_j[d.action_index];
        } else {
            a = d.fixed_action;
            d.cur_energy_j = tx_energy(a, cfg.payload_bytes, phy);
        }
        d.busy = true;
        d.cur_action = a;
        d.cur_t0 = t;
        d.replicas_left = a.repetitions;
        d.any_snr = d.any_sir = d.any_ok = false;

        const double at = airtime(a.code, cfg.payload_bytes, phy);
        for (int r = 0; r < a.repetitions; ++r) {
            const int id = static_cast<int>(txs.size());
            txs.push_back(InFlightTx{static_cast<int>(dev), t + r * at, at, a.subchannel, a.code});
            queue.push(Event{t + r * at, seq++, 1, static_cast<int>(dev), id});
        }
    };

    const auto finish_packet = [&](std::size_t dev, double t_end) {
        DeviceState& d = devices[dev];
        const bool ack = deliver_ack(d.any_ok, d.cur_action.subchannel, t_end, cfg.jamming, rng);
        double reward = 0.0;
        if (learning) {
            reward = shaped_reward(ack ? 1 : 0, d.cur_energy_j, space.e_min_j, beta,
                                   cfg.learning.literal_eq3);
            reward = std::min(reward, 1.0);  // literal_eq3 can exceed 1; learners expect [0,1]
            if (d.ucb)
                d.ucb->update(d.action_index, reward);
            else
                d.exp3->update(d.action_index, reward, d.exp3_p);
        }
        PacketRecord rec;
        rec.device = static_cast<std::int32_t>(dev);
        rec.packet_index = d.packets_done;
        rec.t_s = d.cur_t0;
        rec.action = d.cur_action;
        rec.snr_ok = d.any_snr;
        rec.sir_ok = d.any_sir;
        rec.data_ok = d.any_ok;
        rec.ack = ack;
        rec.reward = reward;
        rec.energy_j = d.cur_energy_j;
        out.packets.push_back(rec);
        d.packets_done += 1;
        d.busy = false;
        if (d.pending > 0) {
            d.pending -= 1;
            start_packet(dev, t_end);
        }
    };

    for (std::size_t i = 0; i < n; ++i) schedule_arrival(i, 0.0);

    while (!queue.empty()) {
        const Event ev = queue.top();
        queue.pop();
        if (ev.type == 0) {  // arrival
            schedule_arrival(ev.device, ev.time);
            DeviceState& d = devices[ev.device];
            if (d.busy)
                d.pending += 1;
            else
                start_packet(ev.device, ev.time);
        } else if (ev.type == 1) {  // tx start
            InFlightTx& tx = txs[ev.tx_id];
            const double h = expo(rng);  // unit-mean exponential power fade
            const std::size_t dev = static_cast<std::size_t>(tx.device);
            tx.signal_w = received_power(devices[dev].cur_action.power_dbm, dep.distance(dev), h,
                                         phy);
            auto& bucket = active[key(tx.subchannel, tx.code)];
            for (int other_id : bucket) {
                txs[other_id].interference_w += tx.signal_w;
                tx.interference_w += txs[other_id].signal_w;
            }
            bucket.push_back(ev.tx_id);
            queue.push(Event{tx.t_start_s + tx.airtime_s, seq++, 2, tx.device, ev.tx_id});
        } else {  // tx end
            InFlightTx& tx = txs[ev.tx_id];
            auto& bucket = active[key(tx.subchannel, tx.code)];
            bucket.erase(std::find(bucket.begin(), bucket.end(), ev.tx_id));
            const double jam = jam_power_w(tx.subchannel, tx.t_start_s, ev.time, cfg.jamming);
            const bool s_ok = snr_ok(tx.signal_w, tx.code, phy);
            const bool i_ok = sir_ok(tx.signal_w, tx.interference_w + jam, phy);
            out.transmission_records += 1;
            DeviceState& d = devices[static_cast<std::size_t>(tx.device)];
            d.any_snr |= s_ok;
            d.any_sir |= i_ok;
            d.any_ok |= (s_ok && i_ok);
            d.replicas_left -= 1;
            if (d.replicas_left == 0) finish_packet(static_cast<std::size_t>(tx.device), ev.time);
        }
    }
    return out;
}

}  // namespace loramab
