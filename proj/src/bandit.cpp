#include "loramab/bandit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace loramab {

double shaped_reward(int ack, double e_k, double e_min, double beta, bool literal_eq3) {
    if (!(e_min > 0.0) || !(e_k > 0.0))
        throw std::invalid_argument("shaped_reward: energies must be positive");
    if (e_k < e_min)
        throw std::invalid_argument("shaped_reward: e_k < e_min");
    if (beta < 0.0 || beta > 1.0)
        throw std::invalid_argument("shaped_reward: beta outside [0,1]");
    if (ack == 0) return 0.0;
    const double ratio = literal_eq3 ? e_k / e_min : e_min / e_k;
    return (1.0 - beta) + beta * ratio;
}

std::size_t sample_index(std::span<const double> dist, std::mt19937_64& rng) {
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    double acc = 0.0;
    for (std::size_t k = 0; k < dist.size(); ++k) {
        acc += dist[k];
        if (u < acc) return k;
    }
    return dist.size() - 1;  // guards against rounding at u ~ 1
}

Ucb1::Ucb1(std::size_t n_actions, double alpha, bool literal_index)
    : cum_reward_(n_actions, 0.0), visits_(n_actions, 1), alpha_(alpha),
      literal_index_(literal_index) {
    if (n_actions == 0) throw std::invalid_argument("Ucb1: empty action set");
    if (alpha < 0.0) throw std::invalid_argument("Ucb1: alpha must be >= 0");
}

Ucb1 Ucb1::with_prior(std::size_t n_actions, double alpha, std::span<const double> prior,
                      long pseudo_count, bool literal_index) {
    if (prior.size() != n_actions) throw std::invalid_argument("Ucb1::with_prior: size mismatch");
    if (pseudo_count < 1) throw std::invalid_argument("Ucb1::with_prior: pseudo_count < 1");
    Ucb1 s(n_actions, alpha, literal_index);
    for (std::size_t k = 0; k < n_actions; ++k) {
        if (prior[k] < 0.0) throw std::invalid_argument("Ucb1::with_prior: negative prior");
        s.cum_reward_[k] = prior[k] * static_cast<double>(pseudo_count);
        s.visits_[k] = pseudo_count;
    }
    return s;
}

double Ucb1::index(std::size_t k) const {
    const double value = literal_index_ ? cum_reward_[k] : mean(k);
    return value + std::sqrt(alpha_ * std::log(static_cast<double>(t_)) /
                             static_cast<double>(visits_[k]));
}

std::size_t Ucb1::select() const {
    std::size_t best = 0;
    double best_index = index(0);
    for (std::size_t k = 1; k < size(); ++k) {
        const double ik = index(k);
        if (ik > best_index) {
            best_index = ik;
            best = k;
        }
    }
    return best;
}

void Ucb1::update(std::size_t k, double reward) {
    if (k >= size()) throw std::out_of_range("Ucb1::update: bad action index");
    if (reward < 0.0 || reward > 1.0)
        throw std::invalid_argument("Ucb1::update: reward outside [0,1]");
    cum_reward_[k] += reward;
    visits_[k] += 1;
    t_ += 1;
}

Exp3::Exp3(std::size_t n_actions, double rho) : weights_(n_actions, 1.0), rho_(rho) {
    if (n_actions == 0) throw std::invalid_argument("Exp3: empty action set");
    if (!(rho > 0.0) || rho > 1.0) throw std::invalid_argument("Exp3: rho outside (0,1]");
}

Exp3 Exp3::with_prior(std::size_t n_actions, double rho, std::span<const double> prior) {
    if (prior.size() != n_actions) throw std::invalid_argument("Exp3::with_prior: size mismatch");
    Exp3 s(n_actions, rho);
    for (std::size_t k = 0; k < n_actions; ++k) {
        if (prior[k] < 0.0) throw std::invalid_argument("Exp3::with_prior: negative prior");
        s.weights_[k] = std::exp(prior[k]);
    }
    return s;
}

std::vector<double> Exp3::distribution() const {
    double sum = 0.0;
    for (double w : weights_) {
        if (!(w > 0.0) || !std::isfinite(w))
            throw std::logic_error("Exp3: weight invariant violated");
        sum += w;
    }
    const std::size_t n = weights_.size();
    std::vector<double> p(n);
    for (std::size_t k = 0; k < n; ++k)
        p[k] = (1.0 - rho_) * weights_[k] / sum + rho_ / static_cast<double>(n);
    return p;
}

std::size_t Exp3::sample(std::mt19937_64& rng) const {
    const auto p = distribution();
    return sample_index(p, rng);
}

void Exp3::update(std::size_t k, double reward, double p_k) {
    if (k >= size()) throw std::out_of_range("Exp3::update: bad action index");
    if (reward < 0.0 || reward > 1.0)
        throw std::invalid_argument("Exp3::update: reward outside [0,1]");
    if (!(p_k > 0.0)) throw std::invalid_argument("Exp3::update: p_k must be positive");
    weights_[k] *= std::exp(rho_ * reward / (static_cast<double>(size()) * p_k));
    const double wmax = *std::max_element(weights_.begin(), weights_.end());
    if (wmax > 1e100) {
        double sum = 0.0;
        for (double w : weights_) sum += w;
        for (double& w : weights_) w /= sum;
    }
}

}  // namespace loramab
