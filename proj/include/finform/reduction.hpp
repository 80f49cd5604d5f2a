#pragma once

#include <functional>
#include <vector>

#include "finform/plant.hpp"

namespace finform {

/// C1 curve eta: [lambda_lo, lambda_hi] -> parameter space, reducing a
/// d-dimensional search to the scalar algorithm.
struct EtaCurve {
    int param_dim = 1;
    double lambda_lo = 0.0;
    double lambda_hi = 1.0;
    std::function<void(double lambda, Vec& out)> eta;
    int smoothness_grid = 512;

    static EtaCurve identity(double lo, double hi);
};

struct AssumptionReport {
    bool ok = false;
    Vec worst_theta;          // grid theta with the largest best-lambda mismatch
    double achieved_delta = 0.0;
    double requested_delta = 0.0;
    int theta_grid_size = 0;
    int lambda_grid_size = 0;
    int x_grid_size = 0;
};

/// Brute-force check of the curve-approximation assumption: for every theta in
/// `theta_grid` there is a lambda whose curve point matches f(., theta) within
/// `delta_cap` uniformly over `x_grid`.
AssumptionReport verify_assumption(const Plant& plant, const EtaCurve& curve, double delta_cap,
                                   const std::vector<Vec>& theta_grid,
                                   const std::vector<double>& lambda_grid,
                                   const std::vector<Vec>& x_grid);

/// eta(theta_hat): the parameter vector the control law actually uses.
Vec lift_adaptation(const EtaCurve& curve, double scalar_theta_hat);

/// Closed C1 curve through `points` by periodic cubic (Catmull-Rom)
/// interpolation, with knots repeated per `weights` and spread round-robin so
/// heavier points are visited more often per period.
/// Throws DegenerateGrid if the points are all identical.
EtaCurve build_grid_curve(const std::vector<Vec>& points, const std::vector<int>& weights,
                          double lambda_lo = 0.0,
                          double lambda_hi = 6.283185307179586476925286766559);

/// Finite-difference C1 surrogate: bounded second divided differences.
ProbeReport probe_curve_smooth(const EtaCurve& curve, double max_second_divided = 1e4);
/// All sampled curve points inside the admissible parameter box.
ProbeReport probe_curve_in_box(const EtaCurve& curve, const Box& box, double tol = 1e-9);

}  // namespace finform
