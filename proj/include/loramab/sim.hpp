#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "loramab/config.hpp"
#include "loramab/phy.hpp"

namespace loramab {

struct Deployment {
    double radius_m = 0.0;
    std::vector<std::array<double, 2>> positions;
    std::vector<double> packet_interval_s;  // per-device mean inter-packet time

    std::size_t size() const { return positions.size(); }
    double distance(std::size_t i) const {
        return std::hypot(positions[i][0], positions[i][1]);
    }
};

/// Poisson point process on a disc centered at the gateway. Density mode draws
/// the count from Poisson(lambda * pi * R^2); count mode places exactly `count`.
Deployment deploy_ppp(double radius_m, std::optional<double> density_per_m2,
                      std::optional<int> count, double packet_interval_s, std::mt19937_64& rng);

struct CandidateTx {
    int device = 0;
    double t_start_s = 0.0;
    double airtime_s = 0.0;
    int subchannel = 0;
    int code = 7;
    double signal_w = 0.0;  // received power at the gateway, fade included

    double t_end_s() const { return t_start_s + airtime_s; }
};

struct TransmissionRecord {
    int device = 0;
    double t_start_s = 0.0;
    double airtime_s = 0.0;
    int subchannel = 0;
    int code = 7;
    bool snr_ok = false;
    bool sir_ok = false;
};

/// Summed received power of data-mode jammers overlapping [t0, t1] on a subchannel.
double jam_power_w(int subchannel, double t0, double t1, std::span<const JamEntry> jamming);

bool snr_ok(double signal_w, int code, const PhyConfig& cfg);
bool sir_ok(double signal_w, double interference_w, const PhyConfig& cfg);

/// Capture resolution for one transmission against the overlapping set
/// (same subchannel; only same-code entries contribute interference) plus any
/// active data jammer.
TransmissionRecord resolve_transmission(const CandidateTx& tx,
                                        std::span<const CandidateTx> concurrent,
                                        std::span<const JamEntry> jamming, const PhyConfig& cfg);

/// ACK delivery: data must have succeeded and any feedback jam active on the
/// subchannel drops the ACK with its drop probability.
bool deliver_ack(bool data_ok, int subchannel, double t_s, std::span<const JamEntry> jamming,
                 std::mt19937_64& rng);

struct PacketRecord {
    std::int32_t device = 0;
    std::int32_t packet_index = 0;  // per-device sequence number
    double t_s = 0.0;               // first replica start time
    Action action;
    bool snr_ok = false;  // OR over replicas
    bool sir_ok = false;
    bool data_ok = false;  // any replica decoded
    bool ack = false;      // after feedback jamming
    double reward = 0.0;
    double energy_j = 0.0;
};

struct ReplicationResult {
    int replication = 0;
    Deployment deployment;
    std::vector<PacketRecord> packets;       // ordered by completion time
    long long transmission_records = 0;      // one per replica
};

/// Equal-split baseline: distance-sorted devices, codes balanced by airtime
/// load, subchannels round-robin, power fixed at 14 dBm.
std::vector<Action> equal_split_assignment(const Deployment& dep, const ActionSpaceConfig& space,
                                           int payload_bytes, const PhyConfig& phy);

/// One full replication; deterministic given (cfg, replication index).
ReplicationResult simulate_replication(const ScenarioConfig& cfg, int replication);

/// Core loop with an explicit deployment and rng stream (used by tests).
ReplicationResult simulate_replication(const ScenarioConfig& cfg, const Deployment& dep,
                                       std::mt19937_64& rng, int replication);

std::mt19937_64 make_rng(std::uint64_t seed, int replication);

}  // namespace loramab
