#pragma once

#include <string>

#include "finform/plant.hpp"

namespace finform {

/// Certainty-equivalence control
///   u = (L_g psi)^{-1} ( -L_f(x, theta_hat) psi - phi(psi) + upsilon )
/// Throws SingularControlDirection when |L_g psi| < plant.lg_psi_floor.
double eval_control(const Plant& plant, const Vec& x, const Vec& theta_hat,
                    const FeedbackPhi& phi, double upsilon_val);

struct ClosedLoopDerivative {
    Vec xdot;
    double psi_dot_chain = 0.0;  // grad_psi . xdot
    double psi_dot_error = 0.0;  // f(x,theta) - f(x,theta_hat) - phi(psi) + upsilon
    double u = 0.0;
};

/// Plant derivative under eval_control; psi-dot is exposed through both the
/// chain rule and the error model so integrations can cross-validate them.
ClosedLoopDerivative closed_loop_rhs(const Plant& plant, const Vec& x, const Vec& theta_hat,
                                     const FeedbackPhi& phi, double upsilon_val);

struct RadialReport {
    bool pass = true;
    Vec witness;        // point with small |psi| on an outer shell, when failing
    double shell_norm = 0.0;
    std::string detail;
};

/// Heuristic surrogate for "psi bounded implies x bounded": min |psi| over
/// nested shells of growing ||x||_inf must grow.
RadialReport check_psi_radial_unboundedness(const Plant& plant, const Box& sample_box,
                                            int shells = 8, int per_axis = 41);

}  // namespace finform
