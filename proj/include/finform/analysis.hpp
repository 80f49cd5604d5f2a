#pragma once

#include <optional>
#include <vector>

#include "finform/plant.hpp"
#include "finform/scenarios.hpp"
#include "finform/sim.hpp"

namespace finform {

/// delta0 from the requested goal radius; strictly inside the k*eps/3 ceiling
/// the convergence argument needs.
inline double delta0_for(double epsilon, double k) { return k * epsilon / 4.0; }

/// Trajectory of theta0' = gamma S (phi(psi) + psi') (phi(psi) + alpha)
/// integrated along the trace (trapezoid rule) from theta0(t0).
Vec integrate_differential_form(const Trace& trace, double gamma, const FeedbackPhi& phi);

/// sup |theta0_integrated - theta0_recorded|: the finite form must realize the
/// differential form up to integration error.
double differential_form_oracle(const Trace& trace, const AdaptConfig& cfg,
                                const FeedbackPhi& phi);

/// Mean-value factor F with f(x,theta) - f(x,theta_hat) = F . (theta - theta_hat),
/// by Gauss-Legendre quadrature along the parameter segment.
Vec hadamard_factor(const Plant& plant, const Vec& x, const Vec& theta, const Vec& theta_hat,
                    int quad_points = 64);

/// |f(x,theta) - f(x,theta_hat) - F . (theta - theta_hat)|.
double hadamard_identity_residual(const Plant& plant, const Vec& x, const Vec& theta,
                                  const Vec& theta_hat, int quad_points = 64);

struct DwellMetrics {
    bool never_entered = true;
    double t_enter = 0.0;            // first entry into the band
    bool stays = false;              // no excursion above radius + tol after first entry
    bool settled = false;            // inside for the whole remainder from t_settle on
    double t_settle = 0.0;
    double max_excursion_after = 0.0;
    double radius = 0.0;
};

/// Goal-set dwell along a trace, radius = epsilon + Delta / k.
DwellMetrics dwell_metrics(const Trace& trace, double epsilon, double k, double Delta,
                           double excursion_tol = 1e-6);

struct SweepRow {
    double k = 0.0;
    bool reached = false;
    double t_enter = 0.0;
    double sup_u = 0.0;
    double sup_f = 0.0;  // sup |f(x, theta_true)| along the run
};

/// Reruns the scenario with phi = k psi for each k (shared delta0 and epsilon);
/// non-domination shows as every run reaching the goal set with no 1/k blow-up
/// in sup |u|.
std::vector<SweepRow> non_domination_sweep(const Scenario& sc, const std::vector<double>& k_list,
                                           std::optional<double> delta0 = std::nullopt,
                                           std::optional<double> epsilon = std::nullopt);

struct ConvergenceReport {
    bool converged = false;
    double t_conv = 0.0;
    double terminal_distance = 0.0;
    std::vector<Vec> class_grid_members;
};

/// Distance of theta_hat(t) to the sampled equivalence class [theta_true]_Delta
/// falls below epsilon and stays.
ConvergenceReport parameter_convergence(const Trace& trace, const Plant& plant, double epsilon,
                                        double Delta, const std::vector<Vec>& x_grid,
                                        const std::vector<Vec>& theta_grid);

/// Mean theta0 growth rate of each ACTIVE segment whose start lies past t1.
std::vector<double> active_segment_growth_rates(const Trace& trace, double t1);

/// Durations of the ACTIVE intervals of a run, from the switch log.
std::vector<double> active_interval_lengths(const Trace& trace);

/// Gauss-Legendre nodes/weights on [0, 1].
void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace finform
