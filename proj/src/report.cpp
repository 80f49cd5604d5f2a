#include "finform/report.hpp"

#include <cstdio>
#include <sstream>

namespace finform {

namespace {
std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}
}  // namespace

std::string format_run_report(const Scenario& sc, const SimResult& res, const DwellMetrics& dwell,
                              double oracle_sup_diff) {
    std::ostringstream os;
    os << "# finform-report v1\n";
    os << "scenario = " << sc.name << "\n";
    os << "k = " << num(sc.phi.k) << "\n";
    os << "gamma = " << num(sc.adapt.gamma) << "\n";
    os << "delta0 = " << num(sc.adapt.delta0) << "\n";
    os << "Delta = " << num(sc.adapt.Delta) << "\n";
    os << "delta = " << num(sc.adapt.delta()) << "\n";
    os << "epsilon = " << num(sc.expected.epsilon) << "\n";
    os << "dwell_radius = " << num(dwell.radius) << "\n";
    os << "dt = " << num(sc.sim.dt) << "\n";
    os << "t_end = " << num(sc.sim.t_end) << "\n";
    os << "aborted = " << (res.diag.aborted ? "true" : "false") << "\n";
    if (res.diag.aborted) os << "abort_reason = " << res.diag.abort_reason << "\n";
    os << "never_entered = " << (dwell.never_entered ? "true" : "false") << "\n";
    if (!dwell.never_entered) {
        os << "t_enter = " << num(dwell.t_enter) << "\n";
        os << "stays = " << (dwell.stays ? "true" : "false") << "\n";
        os << "settled = " << (dwell.settled ? "true" : "false") << "\n";
        if (dwell.settled) os << "t_settle = " << num(dwell.t_settle) << "\n";
        os << "max_excursion_after_entry = " << num(dwell.max_excursion_after) << "\n";
    }
    os << "sup_x = " << num(res.diag.sup_x) << "\n";
    os << "sup_u = " << num(res.diag.sup_u) << "\n";
    os << "sup_theta0 = " << num(res.diag.sup_theta0) << "\n";
    os << "event_count = " << res.diag.event_count << "\n";
    os << "monotonicity_violations = " << res.diag.monotonicity_violations << "\n";
    os << "worst_theta0_drop = " << num(res.diag.worst_theta0_drop) << "\n";
    os << "max_error_model_residual = " << num(res.diag.max_error_model_residual) << "\n";
    os << "transient_horizon = " << num(res.diag.transient_horizon) << "\n";
    os << "differential_form_sup_diff = " << num(oracle_sup_diff) << "\n";
    if (!res.trace.theta_hat.empty()) {
        const Vec& th = res.trace.theta_hat.back();
        os << "theta_hat_final =";
        for (double v : th) os << " " << num(v);
        os << "\n";
    }
    return os.str();
}

std::string format_pe_report(const PEReport& rep, const PEQuery& q) {
    std::ostringstream os;
    os << "# finform-pe-report v1\n";
    os << "M = " << num(q.M) << "\n";
    os << "T1 = " << num(q.T1) << "\n";
    os << "epsilon = " << num(q.epsilon) << "\n";
    os << "Delta = " << num(q.Delta) << "\n";
    os << "theta_grid_size = " << q.theta_grid.size() << "\n";
    os << "satisfied = " << (rep.satisfied ? "true" : "false") << "\n";
    os << "min_margin = " << num(rep.min_margin) << "\n";
    os << "quantified_thetas = " << rep.quantified_thetas << "\n";
    os << "window_count = " << rep.window_count << "\n";
    os << "class_members = " << rep.class_grid_members.size() << "\n";
    if (!rep.worst_theta_hat.empty()) {
        os << "worst_theta_hat =";
        for (double v : rep.worst_theta_hat) os << " " << num(v);
        os << "\n";
        os << "worst_window_start = " << num(rep.worst_window_start) << "\n";
    }
    return os.str();
}

}  // namespace finform
