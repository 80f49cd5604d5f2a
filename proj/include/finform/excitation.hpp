#pragma once

#include <vector>

#include "finform/plant.hpp"
#include "finform/sim.hpp"

namespace finform {

/// max over x_grid of |f(x, theta) - f(x, theta_prime)|.
/// theta_prime belongs to [theta]_Delta iff the result is <= Delta.
double class_distance(const Plant& plant, const Vec& theta, const Vec& theta_prime,
                      const std::vector<Vec>& x_grid);

/// Grid members of the equivalence class [theta]_Delta.
std::vector<Vec> class_members(const Plant& plant, const Vec& theta, double Delta,
                               const std::vector<Vec>& theta_grid,
                               const std::vector<Vec>& x_grid);

struct PEQuery {
    double M = 0.1;       // required mismatch margin
    double T1 = 1.0;      // window length
    double epsilon = 0.5; // neighborhood radius around the class
    double Delta = 0.0;   // class level
    std::vector<Vec> theta_grid;
    std::vector<Vec> x_grid;  // for class membership
};

struct PEReport {
    bool satisfied = false;
    double min_margin = 0.0;  // smallest window-max mismatch over quantified thetas
    Vec worst_theta_hat;
    double worst_window_start = 0.0;
    int quantified_thetas = 0;
    int window_count = 0;
    std::vector<Vec> class_grid_members;
};

/// Nonlinear persistent-excitation check along a trace: every T1-window must
/// contain an instant where |f(x, theta_true) - f(x, theta_hat)| > M for every
/// grid theta_hat outside the closed epsilon-neighborhood of [theta_true]_Delta.
PEReport check_nonlinear_pe(const Plant& plant, const Trace& trace, const PEQuery& q);

struct LinearPEReport {
    bool satisfied = false;
    double min_eigenvalue = 0.0;  // smallest windowed-Gram eigenvalue seen
    double worst_window_start = 0.0;
    int window_count = 0;
};

/// Windowed Gram-integral test: int_t^{t+T} x x' dtau > rho I on every window.
LinearPEReport check_linear_pe(const Trace& trace, double T, double rho);

/// Smallest eigenvalue of a symmetric matrix (row-major, n x n) by cyclic Jacobi.
double symmetric_min_eigenvalue(std::vector<double> a, int n);

}  // namespace finform
