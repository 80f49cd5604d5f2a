#include "finform/control.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "finform/errors.hpp"

namespace finform {

double eval_control(const Plant& plant, const Vec& x, const Vec& theta_hat,
                    const FeedbackPhi& phi, double upsilon_val) {
    const double lg = plant.eval_lg_psi(x);
    if (std::abs(lg) < plant.lg_psi_floor) {
        std::ostringstream os;
        os << "|L_g psi| = " << std::abs(lg) << " below floor " << plant.lg_psi_floor;
        throw SingularControlDirection(os.str());
    }
    const double p = plant.eval_psi(x);
    return (-plant.eval_f_lie(x, theta_hat) - phi.phi(p) + upsilon_val) / lg;
}

ClosedLoopDerivative closed_loop_rhs(const Plant& plant, const Vec& x, const Vec& theta_hat,
                                     const FeedbackPhi& phi, double upsilon_val) {
    ClosedLoopDerivative out;
    out.u = eval_control(plant, x, theta_hat, phi, upsilon_val);

    const std::size_t n = static_cast<std::size_t>(plant.state_dim);
    Vec fv(n), gv(n), gp(n);
    plant.f_field(x, plant.theta_true, fv);
    plant.g_field(x, gv);
    plant.grad_psi(x, gp);

    out.xdot.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.xdot[i] = fv[i] + gv[i] * out.u;

    out.psi_dot_chain = dot(gp, out.xdot);
    const double p = plant.eval_psi(x);
    out.psi_dot_error = plant.eval_f_lie(x, plant.theta_true) -
                        plant.eval_f_lie(x, theta_hat) - phi.phi(p) + upsilon_val;
    return out;
}

RadialReport check_psi_radial_unboundedness(const Plant& plant, const Box& sample_box,
                                            int shells, int per_axis) {
    RadialReport rep;
    const std::size_t n = static_cast<std::size_t>(plant.state_dim);

    double span = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        span = std::max(span, std::max(std::abs(sample_box.lo[i]), std::abs(sample_box.hi[i])));

    double prev_min = -1.0;
    for (int s = 1; s <= shells; ++s) {
        const double r = span * s / shells;
        double shell_min = std::numeric_limits<double>::infinity();
        Vec argmin(n, 0.0);
        // sample the boundary of the inf-norm ball of radius r
        for (std::size_t face_axis = 0; face_axis < n; ++face_axis) {
            for (int sign = -1; sign <= 1; sign += 2) {
                Box face;
                face.lo.assign(n, -r);
                face.hi.assign(n, r);
                face.lo[face_axis] = face.hi[face_axis] = sign * r;
                for (const Vec& x : grid_points(face, per_axis)) {
                    const double v = std::abs(plant.eval_psi(x));
                    if (v < shell_min) {
                        shell_min = v;
                        argmin = x;
                    }
                }
            }
        }
        if (s > 1 && shell_min <= prev_min + 1e-12) {
            rep.pass = false;
            rep.witness = argmin;
            rep.shell_norm = r;
            std::ostringstream os;
            os << "min |psi| did not grow from shell " << prev_min << " to " << shell_min
               << " at ||x||_inf = " << r;
            rep.detail = os.str();
            return rep;
        }
        prev_min = shell_min;
    }
    return rep;
}

}  // namespace finform
