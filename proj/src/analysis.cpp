#include "finform/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace finform {

Vec integrate_differential_form(const Trace& trace, double gamma, const FeedbackPhi& phi) {
    const std::size_t m = trace.size();
    Vec out(m, 0.0);
    if (m == 0) return out;
    out[0] = trace.theta0[0];
    auto integrand = [&](std::size_t i) {
        if (trace.s_delta[i] == 0) return 0.0;
        const double ph = phi.phi(trace.psi[i]);
        return gamma * (ph + trace.psi_dot_true[i]) * (ph + trace.alpha[i]);
    };
    double prev = integrand(0);
    for (std::size_t i = 1; i < m; ++i) {
        const double cur = integrand(i);
        out[i] = out[i - 1] + 0.5 * (trace.t[i] - trace.t[i - 1]) * (prev + cur);
        prev = cur;
    }
    return out;
}

double differential_form_oracle(const Trace& trace, const AdaptConfig& cfg,
                                const FeedbackPhi& phi) {
    const Vec integrated = integrate_differential_form(trace, cfg.gamma, phi);
    double sup = 0.0;
    for (std::size_t i = 0; i < trace.size(); ++i)
        sup = std::max(sup, std::abs(integrated[i] - trace.theta0[i]));
    return sup;
}

void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.resize(static_cast<std::size_t>(n));
    weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        // Newton iteration from the Chebyshev estimate, on [-1, 1]
        double x = std::cos(3.14159265358979323846 * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const std::size_t ii = static_cast<std::size_t>(n - 1 - i);  // ascending
        nodes[ii] = 0.5 * (x + 1.0);
        weights[ii] = 1.0 / ((1.0 - x * x) * pp * pp);
    }
}

Vec hadamard_factor(const Plant& plant, const Vec& x, const Vec& theta, const Vec& theta_hat,
                    int quad_points) {
    std::vector<double> nodes, w;
    gauss_legendre_01(quad_points, nodes, w);
    const std::size_t d = theta.size();
    Vec F(d, 0.0), seg(d), grad(d);
    for (int q = 0; q < quad_points; ++q) {
        const double lam = nodes[static_cast<std::size_t>(q)];
        for (std::size_t c = 0; c < d; ++c) seg[c] = lam * theta[c] + (1.0 - lam) * theta_hat[c];
        plant.eval_f_lie_dtheta(x, seg, grad);
        for (std::size_t c = 0; c < d; ++c) F[c] += w[static_cast<std::size_t>(q)] * grad[c];
    }
    return F;
}

double hadamard_identity_residual(const Plant& plant, const Vec& x, const Vec& theta,
                                  const Vec& theta_hat, int quad_points) {
    const Vec F = hadamard_factor(plant, x, theta, theta_hat, quad_points);
    double inner = 0.0;
    for (std::size_t c = 0; c < theta.size(); ++c) inner += F[c] * (theta[c] - theta_hat[c]);
    return std::abs(plant.eval_f_lie(x, theta) - plant.eval_f_lie(x, theta_hat) - inner);
}

DwellMetrics dwell_metrics(const Trace& trace, double epsilon, double k, double Delta,
                           double excursion_tol) {
    DwellMetrics m;
    m.radius = epsilon + Delta / k;
    std::size_t enter = trace.size();
    for (std::size_t i = 0; i < trace.size(); ++i) {
        if (std::abs(trace.psi[i]) <= m.radius) {
            enter = i;
            break;
        }
    }
    if (enter == trace.size()) return m;  // never entered
    m.never_entered = false;
    m.t_enter = trace.t[enter];
    m.stays = true;
    for (std::size_t i = enter; i < trace.size(); ++i) {
        const double ex = std::abs(trace.psi[i]);
        m.max_excursion_after = std::max(m.max_excursion_after, ex);
        if (ex > m.radius + excursion_tol) m.stays = false;
    }
    // earliest time from which the trajectory remains inside (scan from the tail)
    std::size_t settle = trace.size();
    for (std::size_t i = trace.size(); i-- > 0;) {
        if (std::abs(trace.psi[i]) <= m.radius + excursion_tol)
            settle = i;
        else
            break;
    }
    if (settle < trace.size()) {
        m.settled = true;
        m.t_settle = trace.t[settle];
    }
    return m;
}

std::vector<SweepRow> non_domination_sweep(const Scenario& sc, const std::vector<double>& k_list,
                                           std::optional<double> delta0,
                                           std::optional<double> epsilon) {
    const double eps = epsilon.value_or(sc.expected.epsilon);
    double d0;
    if (delta0) {
        d0 = *delta0;
    } else {
        double kmin = std::numeric_limits<double>::infinity();
        for (double k : k_list) kmin = std::min(kmin, k);
        d0 = delta0_for(eps, kmin);
    }

    std::vector<SweepRow> rows;
    for (double k : k_list) {
        Scenario run_sc = sc;
        run_sc.phi = FeedbackPhi::linear(k);
        run_sc.adapt.delta0 = d0;
        run_sc.adapt.filter = tune_filter(d0, sc.expected.beta1);
        run_sc.sim.dwell_radius = eps + run_sc.adapt.Delta / k;
        // slow feedback needs a longer horizon to coast into the goal set
        run_sc.sim.t_end = std::max(sc.sim.t_end, 16.0 / k);
        run_sc.sim.record_stride = std::max(run_sc.sim.record_stride, 10);

        const SimResult res = run_sc.run();
        SweepRow row;
        row.k = k;
        row.sup_u = res.diag.sup_u;
        const DwellMetrics dm =
            dwell_metrics(res.trace, eps, k, run_sc.adapt.Delta);
        // reached in the omega-limit sense: inside the goal set from some
        // finite time to the end of the horizon
        row.reached = dm.settled;
        row.t_enter = dm.settled ? dm.t_settle : -1.0;
        double supf = 0.0;
        for (const Vec& x : res.trace.x)
            supf = std::max(supf, std::abs(sc.plant.eval_f_lie(x, sc.plant.theta_true)));
        row.sup_f = supf;
        rows.push_back(row);
    }
    return rows;
}

namespace {
double euclid(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}
}  // namespace

std::vector<double> active_segment_growth_rates(const Trace& trace, double t1) {
    std::vector<double> rates;
    std::size_t i = 0;
    const std::size_t m = trace.size();
    while (i < m) {
        if (trace.s_delta[i] == 1 && trace.t[i] >= t1) {
            std::size_t j = i;
            while (j < m && trace.s_delta[j] == 1) ++j;
            if (j - i >= 2) {
                const double len = trace.t[j - 1] - trace.t[i];
                if (len > 0.0) rates.push_back((trace.theta0[j - 1] - trace.theta0[i]) / len);
            }
            i = j;
        } else {
            ++i;
        }
    }
    return rates;
}

std::vector<double> active_interval_lengths(const Trace& trace) {
    std::vector<double> lens;
    if (trace.events.empty()) return lens;
    // an ENTER can only close an active stretch, so a leading ENTER means the
    // run started active at t = 0
    bool in_active = trace.events.front().kind == EventKind::Enter;
    double active_since = 0.0;
    for (const SwitchEvent& ev : trace.events) {
        if (ev.kind == EventKind::Enter) {
            if (in_active) lens.push_back(ev.t - active_since);
            in_active = false;
        } else {
            active_since = ev.t;
            in_active = true;
        }
    }
    return lens;  // a trailing open active stretch is not counted
}

ConvergenceReport parameter_convergence(const Trace& trace, const Plant& plant, double epsilon,
                                        double Delta, const std::vector<Vec>& x_grid,
                                        const std::vector<Vec>& theta_grid) {
    ConvergenceReport rep;
    rep.class_grid_members = class_members(plant, plant.theta_true, Delta, theta_grid, x_grid);
    if (rep.class_grid_members.empty() || trace.size() == 0) return rep;

    auto dist_to_class = [&](const Vec& th) {
        double dmin = std::numeric_limits<double>::infinity();
        for (const Vec& c : rep.class_grid_members) dmin = std::min(dmin, euclid(th, c));
        return dmin;
    };

    // earliest time from which the distance stays below epsilon
    std::size_t idx = trace.size();
    for (std::size_t i = trace.size(); i-- > 0;) {
        if (dist_to_class(trace.theta_hat[i]) <= epsilon)
            idx = i;
        else
            break;
    }
    rep.terminal_distance = dist_to_class(trace.theta_hat.back());
    if (idx < trace.size()) {
        rep.converged = true;
        rep.t_conv = trace.t[idx];
    }
    return rep;
}

}  // namespace finform
