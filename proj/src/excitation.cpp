#include "finform/excitation.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "finform/errors.hpp"

namespace finform {

double class_distance(const Plant& plant, const Vec& theta, const Vec& theta_prime,
                      const std::vector<Vec>& x_grid) {
    double sup = 0.0;
    for (const Vec& x : x_grid)
        sup = std::max(sup, std::abs(plant.eval_f_lie(x, theta) - plant.eval_f_lie(x, theta_prime)));
    return sup;
}

std::vector<Vec> class_members(const Plant& plant, const Vec& theta, double Delta,
                               const std::vector<Vec>& theta_grid,
                               const std::vector<Vec>& x_grid) {
    std::vector<Vec> out;
    for (const Vec& th : theta_grid)
        if (class_distance(plant, theta, th, x_grid) <= Delta) out.push_back(th);
    return out;
}

namespace {

double euclid_dist(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

}  // namespace

PEReport check_nonlinear_pe(const Plant& plant, const Trace& trace, const PEQuery& q) {
    PEReport rep;
    if (trace.size() < 2) throw InsufficientTrace("check_nonlinear_pe: empty trace");
    const double dt = trace.t[1] - trace.t[0];
    const std::size_t w = static_cast<std::size_t>(std::llround(q.T1 / dt));
    if (w < 1 || trace.size() <= w)
        throw InsufficientTrace("check_nonlinear_pe: trace shorter than one T1 window");

    rep.class_grid_members = class_members(plant, plant.theta_true, q.Delta, q.theta_grid, q.x_grid);

    // quantified set: grid thetas strictly outside the closed epsilon-neighborhood
    std::vector<const Vec*> outside;
    for (const Vec& th : q.theta_grid) {
        double dmin = std::numeric_limits<double>::infinity();
        for (const Vec& c : rep.class_grid_members) dmin = std::min(dmin, euclid_dist(th, c));
        if (dmin > q.epsilon) outside.push_back(&th);
    }
    rep.quantified_thetas = static_cast<int>(outside.size());
    rep.window_count = static_cast<int>(trace.size() - w);
    if (outside.empty()) {
        rep.satisfied = false;
        rep.min_margin = 0.0;
        return rep;
    }

    rep.min_margin = std::numeric_limits<double>::infinity();
    std::vector<double> mism(trace.size());
    for (const Vec* th : outside) {
        for (std::size_t i = 0; i < trace.size(); ++i)
            mism[i] = std::abs(plant.eval_f_lie(trace.x[i], plant.theta_true) -
                               plant.eval_f_lie(trace.x[i], *th));
        // sliding-window maximum over (t, t + T1]; min over window starts
        std::deque<std::size_t> dq;
        double worst_for_theta = std::numeric_limits<double>::infinity();
        double worst_start = 0.0;
        for (std::size_t i = 1; i < trace.size(); ++i) {
            while (!dq.empty() && mism[dq.back()] <= mism[i]) dq.pop_back();
            dq.push_back(i);
            if (i >= w) {
                const std::size_t start = i - w;  // window (t_start, t_start + T1]
                while (dq.front() <= start) dq.pop_front();
                const double wmax = mism[dq.front()];
                if (wmax < worst_for_theta) {
                    worst_for_theta = wmax;
                    worst_start = trace.t[start];
                }
            }
        }
        if (worst_for_theta < rep.min_margin) {
            rep.min_margin = worst_for_theta;
            rep.worst_theta_hat = *th;
            rep.worst_window_start = worst_start;
        }
    }
    rep.satisfied = rep.min_margin > q.M;
    return rep;
}

LinearPEReport check_linear_pe(const Trace& trace, double T, double rho) {
    LinearPEReport rep;
    if (trace.size() < 2) throw InsufficientTrace("check_linear_pe: empty trace");
    const double dt = trace.t[1] - trace.t[0];
    const std::size_t w = static_cast<std::size_t>(std::llround(T / dt));
    if (w < 1 || trace.size() <= w)
        throw InsufficientTrace("check_linear_pe: trace shorter than one window");

    const int n = trace.state_dim;
    const std::size_t nn = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);

    // trapezoid weights: prefix sums of x x^T rows
    std::vector<std::vector<double>> prefix(trace.size(), std::vector<double>(nn, 0.0));
    std::vector<double> outer(nn);
    auto outer_of = [&](std::size_t i) {
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c)
                outer[static_cast<std::size_t>(r * n + c)] =
                    trace.x[i][static_cast<std::size_t>(r)] * trace.x[i][static_cast<std::size_t>(c)];
    };
    outer_of(0);
    std::vector<double> prev = outer;
    for (std::size_t i = 1; i < trace.size(); ++i) {
        outer_of(i);
        for (std::size_t k = 0; k < nn; ++k)
            prefix[i][k] = prefix[i - 1][k] + 0.5 * dt * (prev[k] + outer[k]);
        prev = outer;
    }

    rep.min_eigenvalue = std::numeric_limits<double>::infinity();
    rep.satisfied = true;
    std::vector<double> gram(nn);
    for (std::size_t s = 0; s + w < trace.size(); ++s) {
        for (std::size_t k = 0; k < nn; ++k) gram[k] = prefix[s + w][k] - prefix[s][k];
        const double ev = symmetric_min_eigenvalue(gram, n);
        ++rep.window_count;
        if (ev < rep.min_eigenvalue) {
            rep.min_eigenvalue = ev;
            rep.worst_window_start = trace.t[s];
        }
        if (ev <= rho) rep.satisfied = false;
    }
    return rep;
}

double symmetric_min_eigenvalue(std::vector<double> a, int n) {
    auto at = [&](int r, int c) -> double& { return a[static_cast<std::size_t>(r * n + c)]; };
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += at(p, q) * at(p, q);
        if (off < 1e-24) break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                if (std::abs(at(p, q)) < 1e-300) continue;
                const double theta = 0.5 * (at(q, q) - at(p, p)) / at(p, q);
                const double tt = (theta >= 0 ? 1.0 : -1.0) /
                                  (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(tt * tt + 1.0);
                const double s = tt * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = at(k, p), akq = at(k, q);
                    at(k, p) = c * akp - s * akq;
                    at(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = at(p, k), aqk = at(q, k);
                    at(p, k) = c * apk - s * aqk;
                    at(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    double mn = at(0, 0);
    for (int i = 1; i < n; ++i) mn = std::min(mn, at(i, i));
    return mn;
}

}  // namespace finform
