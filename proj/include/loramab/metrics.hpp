#pragma once

#include <map>
#include <vector>

#include "loramab/sim.hpp"

namespace loramab {

/// Trailing-window packet success per device, averaged over devices at each
/// per-device packet index. Success is delivery at the gateway (snr && sir).
std::vector<double> windowed_success_series(const ReplicationResult& rep, int window);

/// Mean of the final quartile of a series.
double final_quartile_mean(const std::vector<double>& series);

/// First index after which the series stays within 5% of its final-quartile
/// mean. Returns -1 when the series never settles.
long convergence_index(const std::vector<double>& series, double tolerance = 0.05);

double mean_energy_per_packet(const ReplicationResult& rep);
double mean_energy_per_delivered_packet(const ReplicationResult& rep);

/// Fraction of transmissions that used one of `subchannels` among packets whose
/// start time lies in [t0, t1).
double occupancy_fraction(const ReplicationResult& rep, const std::vector<int>& subchannels,
                          double t0, double t1);

struct OccupancyRow {
    double bucket_start_s = 0.0;
    int subchannel = 0;
    long transmissions = 0;
};

std::vector<OccupancyRow> occupancy_histogram(const ReplicationResult& rep, double bucket_s,
                                              int subchannels);

}  // namespace loramab
