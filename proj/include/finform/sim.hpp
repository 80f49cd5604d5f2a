#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "finform/adapt.hpp"
#include "finform/plant.hpp"

namespace finform {

struct SimConfig {
    double dt = 1e-3;
    double t_end = 10.0;
    double event_tol = 1e-7;  // time tolerance of the band-boundary bisection
    Vec x0;
    int record_stride = 1;
    double dwell_radius = 0.0;  // epsilon + Delta/k; 0 disables the t_enter diagnostic
    bool filter_ic_equilibrium = false;  // start xi at the equilibrium for psi(x0)
    FilterState filter_ic;               // used when the flag is off
};

/// Time-indexed record of one closed-loop run (struct of arrays).
struct Trace {
    int state_dim = 1;
    int theta_cols = 1;

    std::vector<double> t;
    std::vector<Vec> x;
    Vec psi;
    Vec psi_dot_true;
    Vec u;
    Vec alpha;
    Vec theta0;
    std::vector<Vec> theta_hat;
    std::vector<int> s_delta;
    Vec theta_I;
    Vec c_theta;
    std::vector<int> event_flag;

    std::vector<SwitchEvent> events;

    std::size_t size() const { return t.size(); }
};

struct Diagnostics {
    bool aborted = false;
    std::string abort_reason;
    double t_abort = 0.0;

    std::optional<double> t_enter;  // first entry into the dwell band (if tracked)
    double sup_x = 0.0;
    double sup_u = 0.0;
    double sup_theta0 = 0.0;
    int event_count = 0;
    int monotonicity_violations = 0;  // post-transient steps with theta0 drop > 1e-7
    double worst_theta0_drop = 0.0;   // most negative post-transient step increment
    double max_error_model_residual = 0.0;  // |psi_dot_chain - psi_dot_error|
    double transient_horizon = 0.0;         // 10 filter time constants used above
};

struct SimResult {
    Trace trace;
    Diagnostics diag;
};

/// Classical RK4 step (allocating convenience form).
Vec rk4_step(const std::function<void(double, const Vec&, Vec&)>& rhs, const Vec& state, double t,
             double dt);

/// Bisection for a zero of g on [t_lo, t_hi]; std::nullopt when the endpoint
/// values do not straddle zero.
std::optional<double> locate_event(const std::function<double(double)>& g, double t_lo,
                                   double t_hi, double tol);

/// Full coupled run: plant + filter + finite-form adaptation with event
/// localization at |phi(psi) + alpha| = delta. `lift` maps the scalar estimate
/// to the plant's parameter vector (identity when empty).
SimResult simulate(const Plant& plant, const FeedbackPhi& phi, const Disturbance& dist,
                   const AdaptConfig& adapt_cfg, const SimConfig& sim_cfg,
                   const std::function<void(double, Vec&)>& lift = {});

}  // namespace finform
