#include "loramab/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/gauss.hpp>

namespace loramab {

namespace {

using Quad = boost::math::quadrature::gauss_kronrod<double, 31>;
using GaussZ = boost::math::quadrature::gauss<double, 32>;

void check_ring(const Ring& ring) {
    if (!(ring.r_outer >= ring.r_inner) || ring.r_inner < 0.0)
        throw std::invalid_argument("ring radii must satisfy 0 <= r_inner <= r_outer");
}

}  // namespace

double ring_laplace(double s, const Ring& ring, double lambda_duty, const AnalyticModel& m) {
    check_ring(ring);
    if (s < 0.0) throw std::invalid_argument("ring_laplace: s must be >= 0");
    if (s == 0.0 || lambda_duty == 0.0) return 1.0;
    const double a = s * m.p_tx_w() * m.phy.path_gain;  // units m^delta
    const double delta = m.phy.path_loss_exponent;
    const auto integrand = [&](double r) {
        return 2.0 * M_PI * r / (1.0 + std::pow(r, delta) / a);
    };
    double error = 0.0;
    const double integral = Quad::integrate(integrand, ring.r_inner, ring.r_outer, 15, 1e-12,
                                            &error);
    const double tol = std::max(1e-10, 1e-8 * std::abs(integral));
    if (error > tol)
        throw std::runtime_error("ring_laplace: quadrature did not converge, error estimate " +
                                 std::to_string(error));
    return std::exp(-lambda_duty * integral);
}

double q_closed_form(double x, double z, double gamma_thI_linear) {
    if (!(x >= 0.0) || !(z > 0.0) || !(gamma_thI_linear > 0.0))
        throw std::invalid_argument("q_closed_form: arguments must be positive");
    const double sg = std::sqrt(gamma_thI_linear);
    return M_PI * std::atan(x * x / (sg * z * z)) * sg * z * z;
}

double ring_laplace_closed(double s, const Ring& ring, double lambda_duty,
                           const AnalyticModel& m) {
    check_ring(ring);
    if (m.phy.path_loss_exponent != 4.0)
        throw std::invalid_argument("ring_laplace_closed: requires path_loss_exponent = 4");
    if (s == 0.0 || lambda_duty == 0.0) return 1.0;
    const double a = s * m.p_tx_w() * m.phy.path_gain;  // = gamma * z^4 at the capture operating point
    const double sqrt_a = std::sqrt(a);
    const double integral =
        M_PI * sqrt_a *
        (std::atan(ring.r_outer * ring.r_outer / sqrt_a) -
         std::atan(ring.r_inner * ring.r_inner / sqrt_a));
    return std::exp(-lambda_duty * integral);
}

double noise_only_success(int code, double z, const AnalyticModel& m) {
    const double gamma_c = db_to_linear(snr_threshold(code, m.phy));
    const double pg = m.p_tx_w() * m.phy.path_gain;
    return std::exp(-m.phy.noise_power_w() * gamma_c * std::pow(z, m.phy.path_loss_exponent) / pg);
}

double success_probability(int code, double z, const RingPlan& plan, const AnalyticModel& m,
                           bool force_quadrature) {
    if (!(z > 0.0)) throw std::invalid_argument("success_probability: z must be positive");
    const auto it = std::find(plan.codes.begin(), plan.codes.end(), code);
    if (it == plan.codes.end())
        throw std::invalid_argument("success_probability: code not in plan");
    const std::size_t ci = static_cast<std::size_t>(it - plan.codes.begin());

    const double gamma_i = db_to_linear(m.phy.sir_threshold_db);
    const double pg = m.p_tx_w() * m.phy.path_gain;
    const double s = gamma_i * std::pow(z, m.phy.path_loss_exponent) / pg;

    double interference = 1.0;
    const bool closed = !force_quadrature && m.phy.path_loss_exponent == 4.0;
    for (std::size_t j = 0; j < plan.rings.size(); ++j) {
        const double lambda_duty = plan.density[j][ci] * plan.duty[ci];
        interference *= closed ? ring_laplace_closed(s, plan.rings[j], lambda_duty, m)
                               : ring_laplace(s, plan.rings[j], lambda_duty, m);
    }
    return interference * noise_only_success(code, z, m);
}

std::vector<double> uniform_area_edges(double radius_m, int rings) {
    std::vector<double> edges(static_cast<std::size_t>(rings) + 1);
    for (int k = 0; k <= rings; ++k)
        edges[static_cast<std::size_t>(k)] =
            radius_m * std::sqrt(static_cast<double>(k) / static_cast<double>(rings));
    return edges;
}

RingPlan make_ring_plan(const AnalyticModel& m, const std::vector<int>& codes,
                        const std::vector<double>& ring_edges, double lambda) {
    if (codes.empty()) throw std::invalid_argument("make_ring_plan: empty code set");
    if (ring_edges.size() < 2) throw std::invalid_argument("make_ring_plan: need >= 2 ring edges");
    RingPlan plan;
    plan.codes = codes;
    plan.lambda = lambda;
    for (std::size_t k = 0; k + 1 < ring_edges.size(); ++k) {
        plan.rings.push_back(Ring{ring_edges[k], ring_edges[k + 1]});
        check_ring(plan.rings.back());
    }
    plan.duty.reserve(codes.size());
    for (int c : codes) plan.duty.push_back(airtime(c, m.payload_bytes, m.phy) / m.t_rep_s);
    // start uniform over codes
    plan.density.assign(plan.rings.size(),
                        std::vector<double>(codes.size(), lambda / codes.size()));
    return plan;
}

double ring_plan_objective(const RingPlan& plan, const AnalyticModel& m, double beta) {
    const double duty_min = *std::min_element(plan.duty.begin(), plan.duty.end());
    double obj = 0.0;
    for (std::size_t j = 0; j < plan.rings.size(); ++j) {
        const Ring& ring = plan.rings[j];
        const double area = M_PI * (ring.r_outer * ring.r_outer - ring.r_inner * ring.r_inner);
        for (std::size_t ci = 0; ci < plan.codes.size(); ++ci) {
            if (plan.density[j][ci] == 0.0) continue;
            const int code = plan.codes[ci];
            const auto f = [&](double z) {
                return success_probability(code, z, plan, m) * 2.0 * M_PI * z;
            };
            const double mean_ps = GaussZ::integrate(f, ring.r_inner, ring.r_outer) / area;
            const double energy_term = duty_min / plan.duty[ci];
            obj += plan.density[j][ci] / plan.lambda *
                   ((1.0 - beta) * mean_ps + beta * energy_term);
        }
    }
    return obj;
}

std::vector<std::vector<double>> simplex_grid(int dims, int n) {
    std::vector<std::vector<double>> points;
    std::vector<int> k(static_cast<std::size_t>(dims), 0);
    // enumerate compositions of n into dims parts, lexicographic
    const auto emit = [&]() {
        std::vector<double> p(static_cast<std::size_t>(dims));
        for (int i = 0; i < dims; ++i)
            p[static_cast<std::size_t>(i)] = static_cast<double>(k[static_cast<std::size_t>(i)]) /
                                             static_cast<double>(n);
        points.push_back(std::move(p));
    };
    const auto rec = [&](auto&& self, int pos, int remaining) -> void {
        if (pos == dims - 1) {
            k[static_cast<std::size_t>(pos)] = remaining;
            emit();
            return;
        }
        for (int v = 0; v <= remaining; ++v) {
            k[static_cast<std::size_t>(pos)] = v;
            self(self, pos + 1, remaining - v);
        }
    };
    rec(rec, 0, n);
    return points;
}

RingPlan optimize_ring_densities(const AnalyticModel& m, double beta,
                                 const std::vector<int>& codes,
                                 const std::vector<double>& ring_edges, double lambda,
                                 double grid_step) {
    if (codes.empty()) throw std::invalid_argument("optimize_ring_densities: empty code set");
    RingPlan plan = make_ring_plan(m, codes, ring_edges, lambda);
    if (codes.size() == 1) {
        for (auto& row : plan.density) row[0] = lambda;  // only feasible point
        return plan;
    }

    const int n = std::max(1, static_cast<int>(std::lround(1.0 / grid_step)));
    const auto grid = simplex_grid(static_cast<int>(codes.size()), n);

    const auto ascend = [&](RingPlan start) {
        RingPlan best = std::move(start);
        double best_obj = ring_plan_objective(best, m, beta);
        bool improved = true;
        while (improved) {
            improved = false;
            for (std::size_t j = 0; j < best.rings.size(); ++j) {
                RingPlan trial = best;
                for (const auto& frac : grid) {
                    for (std::size_t ci = 0; ci < codes.size(); ++ci)
                        trial.density[j][ci] = frac[ci] * lambda;
                    const double obj = ring_plan_objective(trial, m, beta);
                    if (obj > best_obj + 1e-12) {
                        best_obj = obj;
                        best.density[j] = trial.density[j];
                        improved = true;
                    }
                }
            }
        }
        return std::pair<RingPlan, double>(best, best_obj);
    };

    // multi-start: uniform plus every single-code corner
    auto [best, best_obj] = ascend(plan);
    for (std::size_t corner = 0; corner < codes.size(); ++corner) {
        RingPlan start = plan;
        for (auto& row : start.density) {
            std::fill(row.begin(), row.end(), 0.0);
            row[corner] = lambda;
        }
        auto [cand, obj] = ascend(start);
        if (obj > best_obj) {
            best = cand;
            best_obj = obj;
        }
    }
    return best;
}

}  // namespace loramab
