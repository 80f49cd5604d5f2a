#include "finform/sim.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "finform/control.hpp"
#include "finform/errors.hpp"

namespace finform {

namespace {

struct Rk4Scratch {
    Vec k1, k2, k3, k4, tmp;
    void resize(std::size_t n) {
        k1.resize(n);
        k2.resize(n);
        k3.resize(n);
        k4.resize(n);
        tmp.resize(n);
    }
};

template <typename Rhs>
void rk4_inplace(const Rhs& rhs, const Vec& z, double t, double dt, Vec& out, Rk4Scratch& s) {
    const std::size_t n = z.size();
    s.resize(n);
    rhs(t, z, s.k1);
    for (std::size_t i = 0; i < n; ++i) s.tmp[i] = z[i] + 0.5 * dt * s.k1[i];
    rhs(t + 0.5 * dt, s.tmp, s.k2);
    for (std::size_t i = 0; i < n; ++i) s.tmp[i] = z[i] + 0.5 * dt * s.k2[i];
    rhs(t + 0.5 * dt, s.tmp, s.k3);
    for (std::size_t i = 0; i < n; ++i) s.tmp[i] = z[i] + dt * s.k3[i];
    rhs(t + dt, s.tmp, s.k4);
    out.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = z[i] + dt / 6.0 * (s.k1[i] + 2.0 * s.k2[i] + 2.0 * s.k3[i] + s.k4[i]);
}

}  // namespace

Vec rk4_step(const std::function<void(double, const Vec&, Vec&)>& rhs, const Vec& state, double t,
             double dt) {
    Rk4Scratch s;
    Vec out;
    rk4_inplace(rhs, state, t, dt, out, s);
    return out;
}

std::optional<double> locate_event(const std::function<double(double)>& g, double t_lo,
                                   double t_hi, double tol) {
    double glo = g(t_lo);
    double ghi = g(t_hi);
    if (glo == 0.0) return t_lo;
    if (ghi == 0.0) return t_hi;
    if (glo * ghi > 0.0) return std::nullopt;
    double lo = t_lo, hi = t_hi;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        if (gm == 0.0) return mid;
        if (glo * gm < 0.0) {
            hi = mid;
        } else {
            lo = mid;
            glo = gm;
        }
    }
    return 0.5 * (lo + hi);
}

SimResult simulate(const Plant& plant, const FeedbackPhi& phi, const Disturbance& dist,
                   const AdaptConfig& adapt_cfg, const SimConfig& sim_cfg,
                   const std::function<void(double, Vec&)>& lift) {
    if (sim_cfg.dt <= 0.0) throw std::invalid_argument("simulate: dt must be > 0");
    if (sim_cfg.t_end < sim_cfg.dt)
        throw std::invalid_argument("simulate: t_end shorter than one step");
    if (sim_cfg.event_tol >= sim_cfg.dt)
        throw std::invalid_argument("simulate: event_tol must be < dt");
    if (sim_cfg.record_stride < 1) throw std::invalid_argument("simulate: record_stride >= 1");
    if (!adapt_cfg.valid()) throw std::invalid_argument("simulate: invalid AdaptConfig");
    if (static_cast<int>(sim_cfg.x0.size()) != plant.state_dim)
        throw std::invalid_argument("simulate: x0 dimension mismatch");
    if (plant.x_domain.dim() == static_cast<std::size_t>(plant.state_dim) &&
        !plant.x_domain.contains(sim_cfg.x0, 1e-12))
        throw std::invalid_argument("simulate: x0 outside the admissible initial-condition box");

    const int n = plant.state_dim;
    const std::size_t nz = static_cast<std::size_t>(n) + 3;  // x, xi1, xi2, theta_I
    const FilterConfig& fc = adapt_cfg.filter;

    AdaptLaw law(adapt_cfg, phi);

    SimResult res;
    Trace& tr = res.trace;
    Diagnostics& dg = res.diag;
    tr.state_dim = n;
    tr.theta_cols = lift ? plant.param_dim : 1;
    dg.transient_horizon = fc.transient_horizon();

    Vec x_buf(static_cast<std::size_t>(n)), th_buf, fv(static_cast<std::size_t>(n)),
        gv(static_cast<std::size_t>(n)), gp(static_cast<std::size_t>(n));

    auto theta_hat_of = [&](double th0, Vec& out) {
        const double lam = lambda_eval(adapt_cfg.wrap, th0);
        if (lift) {
            lift(lam, out);
        } else {
            out.assign(1, lam);
        }
    };

    // closed-loop derivative for the packed state [x, xi1, xi2, theta_I]
    auto rhs = [&](double t, const Vec& z, Vec& out) {
        for (int i = 0; i < n; ++i) x_buf[static_cast<std::size_t>(i)] = z[static_cast<std::size_t>(i)];
        const double p = plant.eval_psi(x_buf);
        const double xi1 = z[nz - 3], xi2 = z[nz - 2], thI = z[nz - 1];
        const double a = fc.c1 * xi1;
        const double th0 = law.theta0_at(p, a, thI);
        theta_hat_of(th0, th_buf);
        const double ups = dist.upsilon(t);
        const double u = eval_control(plant, x_buf, th_buf, phi, ups);
        plant.f_field(x_buf, plant.theta_true, fv);
        plant.g_field(x_buf, gv);
        out.resize(nz);
        for (int i = 0; i < n; ++i)
            out[static_cast<std::size_t>(i)] = fv[static_cast<std::size_t>(i)] +
                                               gv[static_cast<std::size_t>(i)] * u;
        out[nz - 3] = xi2 + fc.b1 * p;
        out[nz - 2] = fc.a1 * xi1 + fc.a2 * xi2 + fc.b2 * p;
        out[nz - 1] = law.gate() ? law.theta_I_rate(p, a, xi2) : 0.0;
    };

    auto psi_of = [&](const Vec& z) {
        for (int i = 0; i < n; ++i) x_buf[static_cast<std::size_t>(i)] = z[static_cast<std::size_t>(i)];
        return plant.eval_psi(x_buf);
    };
    auto alpha_of = [&](const Vec& z) { return fc.c1 * z[nz - 3]; };

    // initial packed state
    Vec z(nz, 0.0);
    for (int i = 0; i < n; ++i) z[static_cast<std::size_t>(i)] = sim_cfg.x0[static_cast<std::size_t>(i)];
    const double psi0 = psi_of(z);
    FilterState fs0 = sim_cfg.filter_ic_equilibrium ? FilterState::equilibrium(fc, psi0)
                                                    : sim_cfg.filter_ic;
    z[nz - 3] = fs0.xi1;
    z[nz - 2] = fs0.xi2;
    z[nz - 1] = 0.0;

    law.init(0.0, psi0, fs0.alpha(fc));

    const long long nsteps = static_cast<long long>(std::llround(sim_cfg.t_end / sim_cfg.dt));
    const double dt = sim_cfg.dt;

    Rk4Scratch scratch, scratch_ev;
    Vec z_try, z_ev, z_tmp;

    std::size_t last_event_count = 0;

    auto record_row = [&](double t, const Vec& zz) {
        for (int i = 0; i < n; ++i) x_buf[static_cast<std::size_t>(i)] = zz[static_cast<std::size_t>(i)];
        const double p = plant.eval_psi(x_buf);
        const double a = fc.c1 * zz[nz - 3];
        const double th0 = law.theta0_at(p, a, zz[nz - 1]);
        theta_hat_of(th0, th_buf);
        const double ups = dist.upsilon(t);
        const ClosedLoopDerivative d = closed_loop_rhs(plant, x_buf, th_buf, phi, ups);

        tr.t.push_back(t);
        tr.x.push_back(x_buf);
        tr.psi.push_back(p);
        tr.psi_dot_true.push_back(d.psi_dot_chain);
        tr.u.push_back(d.u);
        tr.alpha.push_back(a);
        tr.theta0.push_back(th0);
        tr.theta_hat.push_back(th_buf);
        tr.s_delta.push_back(law.gate());
        tr.theta_I.push_back(zz[nz - 1]);
        tr.c_theta.push_back(law.c_theta(p, a));
        tr.event_flag.push_back(law.switch_log().size() > last_event_count ? 1 : 0);
        last_event_count = law.switch_log().size();

        dg.max_error_model_residual = std::max(
            dg.max_error_model_residual, std::abs(d.psi_dot_chain - d.psi_dot_error));
        dg.sup_u = std::max(dg.sup_u, std::abs(d.u));
    };

    bool armed = true;
    double th0_prev = law.theta0_at(psi0, fs0.alpha(fc), 0.0);
    dg.sup_theta0 = std::abs(th0_prev);
    dg.sup_x = norm_inf(sim_cfg.x0);
    if (sim_cfg.dwell_radius > 0.0 && std::abs(psi0) <= sim_cfg.dwell_radius) dg.t_enter = 0.0;

    double t_now = 0.0;
    try {
        record_row(0.0, z);
        for (long long step = 0; step < nsteps; ++step) {
            const double t = static_cast<double>(step) * dt;
            t_now = t;
            rk4_inplace(rhs, z, t, dt, z_try, scratch);
            if (!all_finite(z_try)) {
                dg.aborted = true;
                dg.t_abort = t;
                dg.abort_reason = "non-finite state";
                break;
            }

            const double h_end = law.band_excess(psi_of(z_try), alpha_of(z_try));
            const bool inconsistent = (law.phase() == Phase::Active && h_end < 0.0) ||
                                      (law.phase() == Phase::Dormant && h_end > 0.0);

            if (inconsistent && armed) {
                auto g = [&](double tau) {
                    if (tau <= 0.0) return law.band_excess(psi_of(z), alpha_of(z));
                    if (tau >= dt) return h_end;
                    rk4_inplace(rhs, z, t, tau, z_tmp, scratch_ev);
                    return law.band_excess(psi_of(z_tmp), alpha_of(z_tmp));
                };
                const double tau = locate_event(g, 0.0, dt, sim_cfg.event_tol).value_or(0.0);
                if (tau > 0.0) {
                    rk4_inplace(rhs, z, t, tau, z_ev, scratch_ev);
                } else {
                    z_ev = z;
                }
                law.set_theta_I(z_ev[nz - 1]);
                const EventKind kind =
                    law.phase() == Phase::Active ? EventKind::Enter : EventKind::Leave;
                law.apply_event(kind, t + tau, psi_of(z_ev), alpha_of(z_ev));
                if (tau < dt) {
                    rk4_inplace(rhs, z_ev, t + tau, dt - tau, z, scratch);
                } else {
                    z = z_ev;
                }
                armed = false;  // minimum dwell of one integration step
            } else {
                z = z_try;
                armed = true;
            }

            if (!all_finite(z)) {
                dg.aborted = true;
                dg.t_abort = t;
                dg.abort_reason = "non-finite state";
                break;
            }

            const double t_next = static_cast<double>(step + 1) * dt;
            law.set_theta_I(z[nz - 1]);
            const double p = psi_of(z);
            const double a = alpha_of(z);
            law.maybe_reflect(p, a);
            const double th0 = law.theta0(p, a);

            if (t_next >= dg.transient_horizon) {
                const double drop = th0 - th0_prev;
                if (drop < -1e-7) ++dg.monotonicity_violations;
                dg.worst_theta0_drop = std::min(dg.worst_theta0_drop, drop);
            }
            th0_prev = th0;

            dg.sup_theta0 = std::max(dg.sup_theta0, std::abs(th0));
            double xn = 0.0;
            for (int i = 0; i < n; ++i)
                xn = std::max(xn, std::abs(z[static_cast<std::size_t>(i)]));
            dg.sup_x = std::max(dg.sup_x, xn);
            if (sim_cfg.dwell_radius > 0.0 && !dg.t_enter &&
                std::abs(p) <= sim_cfg.dwell_radius)
                dg.t_enter = t_next;

            if ((step + 1) % sim_cfg.record_stride == 0) record_row(t_next, z);
        }
    } catch (const SingularControlDirection& e) {
        dg.aborted = true;
        dg.t_abort = t_now;
        dg.abort_reason = e.what();
    }

    tr.events = law.switch_log();
    dg.event_count = static_cast<int>(tr.events.size());
    return res;
}

}  // namespace finform
