#pragma once

#include <vector>

#include "loramab/phy.hpp"

namespace loramab {

struct Ring {
    double r_inner = 0.0;
    double r_outer = 0.0;
};

/// Centralized allocation: per-ring density of devices using each code.
struct RingPlan {
    std::vector<Ring> rings;
    std::vector<int> codes;
    std::vector<std::vector<double>> density;  // [ring][code index], sums to lambda per ring
    double lambda = 0.0;
    std::vector<double> duty;  // per code, T_c / T_rep
};

/// Scenario slice the analytic model covers: one subchannel, one power level.
struct AnalyticModel {
    PhyConfig phy;
    double p_tx_dbm = 14.0;
    double radius_m = 2000.0;
    double t_rep_s = 200.0;
    int payload_bytes = 20;

    double p_tx_w() const { return dbm_to_watts(p_tx_dbm); }
};

/// Laplace transform of the interference from one ring of duty-weighted
/// density `lambda_duty`, Rayleigh-faded interferers. Adaptive quadrature.
double ring_laplace(double s, const Ring& ring, double lambda_duty, const AnalyticModel& m);

/// Same quantity via the closed form; requires delta = 4.
double ring_laplace_closed(double s, const Ring& ring, double lambda_duty,
                           const AnalyticModel& m);

/// Closed-form antiderivative for delta = 4: the duty-weighted ring exponent is
/// lambda_duty * (Q(r_outer) - Q(r_inner)) at s = gamma_thI * z^4 / (P G).
double q_closed_form(double x, double z, double gamma_thI_linear);

/// Packet success probability at distance z for a device using `code`,
/// against the plan's same-code interference field plus noise.
double success_probability(int code, double z, const RingPlan& plan, const AnalyticModel& m,
                           bool force_quadrature = false);

double noise_only_success(int code, double z, const AnalyticModel& m);

/// Uniform-area ring edges covering [0, R].
std::vector<double> uniform_area_edges(double radius_m, int rings);

RingPlan make_ring_plan(const AnalyticModel& m, const std::vector<int>& codes,
                        const std::vector<double>& ring_edges, double lambda);

/// Objective of the constrained ring-density allocation: density-weighted mix
/// of area-averaged success probability and airtime-normalized energy term.
double ring_plan_objective(const RingPlan& plan, const AnalyticModel& m, double beta);

/// Maximizes the objective subject to sum_c density[j][c] = lambda per ring,
/// by cyclic per-ring simplex grid search with local refinement.
RingPlan optimize_ring_densities(const AnalyticModel& m, double beta,
                                 const std::vector<int>& codes,
                                 const std::vector<double>& ring_edges, double lambda,
                                 double grid_step = 0.01);

/// Enumerates all simplex grid points (step = 1/n) over `dims` coordinates.
std::vector<std::vector<double>> simplex_grid(int dims, int n);

}  // namespace loramab
