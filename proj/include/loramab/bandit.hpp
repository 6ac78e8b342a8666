#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace loramab {

/// ACK indicator scaled by the energy-efficiency mix. With `literal_eq3` the
/// printed beta*E_k/E_min form is used instead of the energy-decreasing one.
double shaped_reward(int ack, double e_k, double e_min, double beta, bool literal_eq3 = false);

/// Samples an index from a discrete distribution with a single uniform draw.
std::size_t sample_index(std::span<const double> dist, std::mt19937_64& rng);

class Ucb1 {
  public:
    Ucb1(std::size_t n_actions, double alpha, bool literal_index = false);

    /// Warm start: prior is an estimated mean reward per action in [0,1],
    /// credited with `pseudo_count` virtual visits. Zero prior with
    /// pseudo_count 1 is exactly the cold start.
    static Ucb1 with_prior(std::size_t n_actions, double alpha, std::span<const double> prior,
                           long pseudo_count, bool literal_index = false);

    std::size_t select() const;
    void update(std::size_t k, double reward);

    std::size_t size() const { return cum_reward_.size(); }
    double cum_reward(std::size_t k) const { return cum_reward_[k]; }
    long visits(std::size_t k) const { return visits_[k]; }
    long t() const { return t_; }
    double mean(std::size_t k) const { return cum_reward_[k] / static_cast<double>(visits_[k]); }
    double index(std::size_t k) const;

  private:
    std::vector<double> cum_reward_;
    std::vector<long> visits_;
    long t_ = 1;
    double alpha_;
    bool literal_index_;
};

class Exp3 {
  public:
    Exp3(std::size_t n_actions, double rho);

    /// Warm start: weights proportional to exp(prior). Zero prior is cold start.
    static Exp3 with_prior(std::size_t n_actions, double rho, std::span<const double> prior);

    std::vector<double> distribution() const;
    std::size_t sample(std::mt19937_64& rng) const;
    void update(std::size_t k, double reward, double p_k);

    std::size_t size() const { return weights_.size(); }
    double weight(std::size_t k) const { return weights_[k]; }
    double rho() const { return rho_; }

  private:
    std::vector<double> weights_;
    double rho_;
};

}  // namespace loramab
