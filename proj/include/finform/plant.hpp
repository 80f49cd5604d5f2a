#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "finform/vec.hpp"

namespace finform {

/// Uncertain plant  x' = f(x, theta) + g(x) u  with goal function psi.
///
/// The adaptation law only ever sees the scalar Lie derivative
/// f_lie(x, theta) = grad_psi(x) . f(x, theta); the vector field is kept for
/// integrating the loop and for cross-validating the error model.
struct Plant {
    int state_dim = 1;
    int param_dim = 1;

    std::function<void(const Vec& x, const Vec& theta, Vec& out)> f_field;
    std::function<void(const Vec& x, Vec& out)> g_field;
    std::function<double(const Vec& x)> psi;
    std::function<void(const Vec& x, Vec& out)> grad_psi;

    /// Scalar uncertainty L_f psi. Defaults to grad_psi . f_field when unset.
    std::function<double(const Vec& x, const Vec& theta)> f_lie;
    /// Analytic d(f_lie)/d(theta); optional, central differences otherwise.
    std::function<void(const Vec& x, const Vec& theta, Vec& out)> f_lie_dtheta;

    Vec theta_true;
    Box theta_domain;
    Box x_domain;  // admissible initial conditions

    double f_bound = 1.0;        // known bound on |f_lie| over the reachable set
    double lg_psi_floor = 1e-6;  // delta_psi > 0

    double eval_psi(const Vec& x) const { return psi(x); }
    double eval_f_lie(const Vec& x, const Vec& theta) const;
    double eval_lg_psi(const Vec& x) const;
    void eval_f_lie_dtheta(const Vec& x, const Vec& theta, Vec& out) const;
};

/// Feedback member of the class C_phi(k): phi in C1 with phi(psi)*psi >= k*psi^2.
/// `antideriv` is the primitive of phi vanishing at 0; the adaptation law needs it.
struct FeedbackPhi {
    double k = 1.0;
    std::function<double(double)> phi;
    std::function<double(double)> antideriv;

    static FeedbackPhi linear(double k);
};

struct Disturbance {
    std::function<double(double)> upsilon;
    double delta_bound = 0.0;       // ||upsilon||_inf <= delta_bound
    double upsilon_dot_bound = 0.0;

    static Disturbance zero();
    static Disturbance sine(double amplitude, double omega);
};

struct ProbeReport {
    bool ok = true;
    std::string detail;
};

/// |L_g psi| >= floor on an n-dim grid over `box`.
ProbeReport probe_lg_psi_floor(const Plant& plant, const Box& box, int per_axis);
/// |f_lie| <= f_bound over x-grid x theta-grid.
ProbeReport probe_f_bound(const Plant& plant, const Box& x_box, int x_per_axis, int theta_per_axis);
/// phi(psi)*psi >= k*psi^2 and bounded finite-difference slope on [-10, 10].
ProbeReport probe_phi_class(const FeedbackPhi& phi, int points = 1001, double slope_max = 1e6);
/// |upsilon| <= delta_bound and |d upsilon/dt| <= dot bound on a time grid.
ProbeReport probe_disturbance(const Disturbance& d, double t_end, int points = 2001);

}  // namespace finform
