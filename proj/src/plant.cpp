#include "finform/plant.hpp"

#include <cmath>
#include <sstream>

namespace finform {

std::vector<Vec> grid_points(const Box& box, int per_axis) {
    const std::size_t d = box.dim();
    std::vector<Vec> axes(d);
    for (std::size_t i = 0; i < d; ++i) {
        axes[i] = (box.hi[i] > box.lo[i]) ? linspace(box.lo[i], box.hi[i], per_axis)
                                          : Vec{box.lo[i]};
    }
    std::vector<Vec> out;
    Vec p(d);
    std::vector<std::size_t> idx(d, 0);
    while (true) {
        for (std::size_t i = 0; i < d; ++i) p[i] = axes[i][idx[i]];
        out.push_back(p);
        std::size_t j = 0;
        for (; j < d; ++j) {
            if (++idx[j] < axes[j].size()) break;
            idx[j] = 0;
        }
        if (j == d) break;
    }
    return out;
}

double Plant::eval_f_lie(const Vec& x, const Vec& theta) const {
    if (f_lie) return f_lie(x, theta);
    Vec fv(static_cast<std::size_t>(state_dim)), gp(static_cast<std::size_t>(state_dim));
    f_field(x, theta, fv);
    grad_psi(x, gp);
    return dot(gp, fv);
}

double Plant::eval_lg_psi(const Vec& x) const {
    Vec gv(static_cast<std::size_t>(state_dim)), gp(static_cast<std::size_t>(state_dim));
    g_field(x, gv);
    grad_psi(x, gp);
    return dot(gp, gv);
}

void Plant::eval_f_lie_dtheta(const Vec& x, const Vec& theta, Vec& out) const {
    out.resize(static_cast<std::size_t>(param_dim));
    if (f_lie_dtheta) {
        f_lie_dtheta(x, theta, out);
        return;
    }
    const double h = 1e-6;
    Vec th = theta;
    for (int i = 0; i < param_dim; ++i) {
        const std::size_t ii = static_cast<std::size_t>(i);
        const double save = th[ii];
        th[ii] = save + h;
        const double fp = eval_f_lie(x, th);
        th[ii] = save - h;
        const double fm = eval_f_lie(x, th);
        th[ii] = save;
        out[ii] = (fp - fm) / (2.0 * h);
    }
}

FeedbackPhi FeedbackPhi::linear(double k) {
    FeedbackPhi out;
    out.k = k;
    out.phi = [k](double p) { return k * p; };
    out.antideriv = [k](double p) { return 0.5 * k * p * p; };
    return out;
}

Disturbance Disturbance::zero() {
    Disturbance d;
    d.upsilon = [](double) { return 0.0; };
    return d;
}

Disturbance Disturbance::sine(double amplitude, double omega) {
    Disturbance d;
    d.upsilon = [amplitude, omega](double t) { return amplitude * std::sin(omega * t); };
    d.delta_bound = std::abs(amplitude);
    d.upsilon_dot_bound = std::abs(amplitude * omega);
    return d;
}

ProbeReport probe_lg_psi_floor(const Plant& plant, const Box& box, int per_axis) {
    for (const Vec& x : grid_points(box, per_axis)) {
        const double lg = std::abs(plant.eval_lg_psi(x));
        if (lg < plant.lg_psi_floor) {
            std::ostringstream os;
            os << "|L_g psi| = " << lg << " < floor " << plant.lg_psi_floor << " at x[0]=" << x[0];
            return {false, os.str()};
        }
    }
    return {true, ""};
}

ProbeReport probe_f_bound(const Plant& plant, const Box& x_box, int x_per_axis, int theta_per_axis) {
    for (const Vec& x : grid_points(x_box, x_per_axis)) {
        for (const Vec& th : grid_points(plant.theta_domain, theta_per_axis)) {
            const double v = std::abs(plant.eval_f_lie(x, th));
            if (v > plant.f_bound) {
                std::ostringstream os;
                os << "|f| = " << v << " exceeds bound " << plant.f_bound << " at x[0]=" << x[0];
                return {false, os.str()};
            }
        }
    }
    return {true, ""};
}

ProbeReport probe_phi_class(const FeedbackPhi& fb, int points, double slope_max) {
    const Vec grid = linspace(-10.0, 10.0, points);
    const double tol = 1e-12;
    double prev = fb.phi(grid[0]);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double p = grid[i];
        const double v = fb.phi(p);
        if (v * p < fb.k * p * p - tol) {
            std::ostringstream os;
            os << "phi(psi)*psi < k*psi^2 at psi=" << p;
            return {false, os.str()};
        }
        if (i > 0) {
            const double slope = (v - prev) / (grid[i] - grid[i - 1]);
            if (!std::isfinite(slope) || std::abs(slope) > slope_max) {
                std::ostringstream os;
                os << "phi slope " << slope << " out of range near psi=" << p;
                return {false, os.str()};
            }
        }
        prev = v;
    }
    return {true, ""};
}

ProbeReport probe_disturbance(const Disturbance& d, double t_end, int points) {
    const Vec ts = linspace(0.0, t_end, points);
    const double tol = 1e-9;
    double prev = d.upsilon(0.0);
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double v = d.upsilon(ts[i]);
        if (std::abs(v) > d.delta_bound + tol) {
            std::ostringstream os;
            os << "|upsilon(" << ts[i] << ")| = " << std::abs(v) << " > Delta " << d.delta_bound;
            return {false, os.str()};
        }
        if (i > 0) {
            const double rate = std::abs(v - prev) / (ts[i] - ts[i - 1]);
            if (rate > d.upsilon_dot_bound + 1e-6 + 0.05 * d.upsilon_dot_bound) {
                std::ostringstream os;
                os << "|d upsilon/dt| ~ " << rate << " > bound " << d.upsilon_dot_bound;
                return {false, os.str()};
            }
        }
        prev = v;
    }
    return {true, ""};
}

}  // namespace finform
