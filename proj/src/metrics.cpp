#include "loramab/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace loramab {

std::vector<double> windowed_success_series(const ReplicationResult& rep, int window) {
    std::vector<std::vector<unsigned char>> by_device(rep.deployment.size());
    for (const PacketRecord& p : rep.packets)
        by_device[static_cast<std::size_t>(p.device)].push_back(p.data_ok ? 1 : 0);

    std::size_t n_max = 0;
    for (const auto& v : by_device) n_max = std::max(n_max, v.size());

    std::vector<double> series(n_max, 0.0);
    for (std::size_t idx = 0; idx < n_max; ++idx) {
        double sum = 0.0;
        long count = 0;
        for (const auto& v : by_device) {
            if (idx >= v.size()) continue;
            const std::size_t lo = idx + 1 >= static_cast<std::size_t>(window)
                                       ? idx + 1 - static_cast<std::size_t>(window)
                                       : 0;
            double s = 0.0;
            for (std::size_t i = lo; i <= idx; ++i) s += v[i];
            sum += s / static_cast<double>(idx - lo + 1);
            count += 1;
        }
        series[idx] = count > 0 ? sum / static_cast<double>(count) : 0.0;
    }
    return series;
}

double final_quartile_mean(const std::vector<double>& series) {
    if (series.empty()) return 0.0;
    const std::size_t start = series.size() - std::max<std::size_t>(1, series.size() / 4);
    double sum = 0.0;
    for (std::size_t i = start; i < series.size(); ++i) sum += series[i];
    return sum / static_cast<double>(series.size() - start);
}

long convergence_index(const std::vector<double>& series, double tolerance) {
    if (series.empty()) return -1;
    const double target = final_quartile_mean(series);
    const double band = tolerance * std::max(target, 1e-12);
    long idx = -1;
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (std::abs(series[i] - target) <= band) {
            if (idx < 0) idx = static_cast<long>(i);
        } else {
            idx = -1;
        }
    }
    return idx;
}

double mean_energy_per_packet(const ReplicationResult& rep) {
    if (rep.packets.empty()) return 0.0;
    double e = 0.0;
    for (const PacketRecord& p : rep.packets) e += p.energy_j;
    return e / static_cast<double>(rep.packets.size());
}

double mean_energy_per_delivered_packet(const ReplicationResult& rep) {
    double e = 0.0;
    long delivered = 0;
    for (const PacketRecord& p : rep.packets) {
        e += p.energy_j;
        if (p.data_ok) delivered += 1;
    }
    return delivered > 0 ? e / static_cast<double>(delivered) : 0.0;
}

double occupancy_fraction(const ReplicationResult& rep, const std::vector<int>& subchannels,
                          double t0, double t1) {
    long total = 0, hits = 0;
    for (const PacketRecord& p : rep.packets) {
        if (p.t_s < t0 || p.t_s >= t1) continue;
        total += 1;
        if (std::find(subchannels.begin(), subchannels.end(), p.action.subchannel) !=
            subchannels.end())
            hits += 1;
    }
    return total > 0 ? static_cast<double>(hits) / static_cast<double>(total) : 0.0;
}

std::vector<OccupancyRow> occupancy_histogram(const ReplicationResult& rep, double bucket_s,
                                              int subchannels) {
    double t_max = 0.0;
    for (const PacketRecord& p : rep.packets) t_max = std::max(t_max, p.t_s);
    const long n_buckets = static_cast<long>(std::floor(t_max / bucket_s)) + 1;
    std::vector<long> counts(static_cast<std::size_t>(n_buckets * subchannels), 0);
    for (const PacketRecord& p : rep.packets) {
        const long b = static_cast<long>(std::floor(p.t_s / bucket_s));
        counts[static_cast<std::size_t>(b * subchannels + p.action.subchannel)] +=
            p.action.repetitions;
    }
    std::vector<OccupancyRow> rows;
    rows.reserve(counts.size());
    for (long b = 0; b < n_buckets; ++b)
        for (int h = 0; h < subchannels; ++h)
            rows.push_back(OccupancyRow{b * bucket_s, h,
                                        counts[static_cast<std::size_t>(b * subchannels + h)]});
    return rows;
}

}  // namespace loramab
