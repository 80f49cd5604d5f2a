#include "finform/checks.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "finform/analysis.hpp"
#include "finform/control.hpp"

namespace finform {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

void push(std::vector<CheckResult>& out, const std::string& name, bool pass,
          const std::string& detail = "") {
    out.push_back({name, pass, detail});
}

}  // namespace

std::vector<CheckResult> verify_scenario(const Scenario& sc, double t_end_override) {
    std::vector<CheckResult> out;

    // hypothesis probes
    {
        Box probe = sc.plant.x_domain;
        ProbeReport r = probe_lg_psi_floor(sc.plant, probe, 101);
        push(out, "plant/lg-psi-floor", r.ok, r.detail);
        r = probe_f_bound(sc.plant, probe, 101, 33);
        push(out, "plant/f-bound", r.ok, r.detail);
        push(out, "plant/theta-true-in-domain",
             sc.plant.theta_domain.contains(sc.plant.theta_true), "");
        r = probe_phi_class(sc.phi);
        push(out, "phi/class-membership", r.ok, r.detail);
        r = probe_disturbance(sc.dist, std::max(sc.sim.t_end, 10.0));
        push(out, "disturbance/bounds", r.ok, r.detail);
        const RadialReport rad = check_psi_radial_unboundedness(sc.plant, sc.plant.x_domain);
        push(out, "psi/radial-unboundedness", rad.pass, rad.detail);
    }
    {
        const LambdaWrap& w = sc.adapt.wrap;
        ProbeReport r = probe_lambda_image(w);
        push(out, "lambda/image-covers-domain", r.ok, r.detail);
        r = probe_lambda_reachability(w);
        push(out, "lambda/reachability", r.ok, r.detail);
        r = probe_lambda_smooth(w);
        push(out, "lambda/smooth", r.ok, r.detail);
    }
    {
        const FilterConfig& f = sc.adapt.filter;
        push(out, "filter/tuning-identities", f.tuning_identities_hold(), "");
        push(out, "filter/hurwitz", f.is_hurwitz(), "");
        push(out, "filter/bound-within-budget",
             filter_error_bound(f, sc.expected.beta1) <= sc.adapt.delta0 / 4.0 + 1e-12,
             fmt(filter_error_bound(f, sc.expected.beta1)));
        push(out, "adapt/delta-exceeds-Delta", sc.adapt.valid() && sc.adapt.delta() > sc.adapt.Delta,
             "");
    }
    if (sc.expected.pe && sc.expected.pe_satisfied) {
        // statement-3 hypothesis: the margin must clear the switching band
        push(out, "pe/margin-exceeds-band",
             sc.expected.pe->M > 2.0 * sc.adapt.delta0 + sc.adapt.Delta,
             fmt(sc.expected.pe->M) + " vs " + fmt(2.0 * sc.adapt.delta0 + sc.adapt.Delta));
    }
    if (sc.eta) {
        ProbeReport r = probe_curve_smooth(*sc.eta);
        push(out, "eta/smooth", r.ok, r.detail);
        r = probe_curve_in_box(*sc.eta, sc.plant.theta_domain, 1e-9);
        push(out, "eta/inside-parameter-box", r.ok, r.detail);
        if (sc.expected.assumption_delta) {
            std::vector<Vec> theta_grid = grid_points(sc.plant.theta_domain, 5);
            std::vector<double> lam_grid;
            for (int i = 0; i < 256; ++i)
                lam_grid.push_back(sc.eta->lambda_lo +
                                   (sc.eta->lambda_hi - sc.eta->lambda_lo) * i / 256.0);
            std::vector<Vec> x_grid;
            for (int i = 0; i <= 100; ++i) x_grid.push_back({-2.0 + 0.04 * i});
            const AssumptionReport ar = verify_assumption(
                sc.plant, *sc.eta, *sc.expected.assumption_delta, theta_grid, lam_grid, x_grid);
            push(out, "eta/assumption-verified", ar.ok,
                 "achieved " + fmt(ar.achieved_delta) + " vs " + fmt(ar.requested_delta));
        }
    }

    // closed-loop run and trace-level invariants
    SimConfig sim = sc.sim;
    if (t_end_override > 0.0) sim.t_end = t_end_override;
    const SimResult res = sc.run(sim);
    const Trace& tr = res.trace;
    const Diagnostics& dg = res.diag;

    push(out, "run/completed", !dg.aborted, dg.abort_reason);
    if (dg.aborted) return out;

    const DwellMetrics dm =
        dwell_metrics(tr, sc.expected.epsilon, sc.phi.k, sc.adapt.Delta);
    push(out, "run/goal-set-entered", !dm.never_entered,
         dm.never_entered ? "" : "t_enter=" + fmt(dm.t_enter));
    push(out, "run/goal-set-dwell", !dm.never_entered && dm.stays,
         "max excursion after entry " + fmt(dm.max_excursion_after) + " vs radius " +
             fmt(dm.radius));
    push(out, "run/t-enter-within-ceiling",
         !dm.never_entered && dm.t_enter <= sc.expected.t_enter_max, fmt(dm.t_enter));

    push(out, "run/monotonicity", dg.monotonicity_violations == 0,
         "violations=" + fmt(dg.monotonicity_violations) +
             " worst drop=" + fmt(dg.worst_theta0_drop));

    const std::vector<double> rates = active_segment_growth_rates(tr, dg.transient_horizon);
    const double rate_floor = 0.9 * sc.adapt.gamma * sc.adapt.delta0 * sc.adapt.delta0 / 2.0;
    double min_rate = rates.empty() ? rate_floor : *std::min_element(rates.begin(), rates.end());
    push(out, "run/active-growth-rate", min_rate >= rate_floor,
         "min " + fmt(min_rate) + " vs floor " + fmt(rate_floor) + " over " +
             fmt(static_cast<double>(rates.size())) + " segments");

    const double oracle = differential_form_oracle(tr, sc.adapt, sc.phi);
    push(out, "run/differential-form-oracle", oracle <= sc.expected.oracle_tol,
         "sup diff " + fmt(oracle));

    bool continuity = true;
    double worst_jump = 0.0;
    for (const SwitchEvent& ev : tr.events) {
        const double jump = std::abs(ev.theta0_after - ev.theta0_before);
        worst_jump = std::max(worst_jump, jump);
        if (jump >= 1e-8) continuity = false;
    }
    push(out, "run/theta0-event-continuity", continuity, "worst jump " + fmt(worst_jump));

    bool alternates = true;
    for (std::size_t i = 1; i < tr.events.size(); ++i)
        if (tr.events[i].kind == tr.events[i - 1].kind) alternates = false;
    push(out, "run/event-log-alternates", alternates,
         "events=" + fmt(static_cast<double>(tr.events.size())));

    push(out, "run/state-bounded", dg.sup_x <= sc.expected.sup_x_max,
         "sup|x| " + fmt(dg.sup_x));
    push(out, "run/theta0-bounded", dg.sup_theta0 <= sc.expected.sup_theta0_max,
         "sup|theta0| " + fmt(dg.sup_theta0));
    push(out, "run/error-model-identity", dg.max_error_model_residual <= 1e-9,
         "max residual " + fmt(dg.max_error_model_residual));

    // theta-hat range and the finite-form bookkeeping identity along the trace
    bool in_range = true;
    bool bookkeeping = true;
    double worst_book = 0.0;
    bool dormant_frozen = true;
    for (std::size_t i = 0; i < tr.size(); ++i) {
        const double lam = lambda_eval(sc.adapt.wrap, tr.theta0[i]);
        if (lam < sc.adapt.wrap.theta_lo - 1e-12 || lam > sc.adapt.wrap.theta_hi + 1e-12)
            in_range = false;
        const double tp = theta_p(tr.psi[i], tr.alpha[i], sc.phi);
        const double recon = sc.adapt.gamma * (tp + tr.theta_I[i] + tr.c_theta[i]);
        worst_book = std::max(worst_book, std::abs(recon - tr.theta0[i]));
        if (std::abs(recon - tr.theta0[i]) > 1e-10) bookkeeping = false;
        if (i > 0 && tr.s_delta[i] == 0 && tr.s_delta[i - 1] == 0 && tr.event_flag[i] == 0 &&
            tr.theta0[i] != tr.theta0[i - 1])
            dormant_frozen = false;
    }
    push(out, "run/theta-hat-in-range", in_range, "");
    push(out, "run/finite-form-bookkeeping", bookkeeping, "worst " + fmt(worst_book));
    push(out, "run/theta0-frozen-when-dormant", dormant_frozen, "");

    // Hadamard mean-value identity probed along the trace
    double worst_hadamard = 0.0;
    const std::size_t stride = std::max<std::size_t>(1, tr.size() / 16);
    for (std::size_t i = 0; i < tr.size(); i += stride) {
        Vec th_hat = tr.theta_hat[i];
        if (static_cast<int>(th_hat.size()) != sc.plant.param_dim) continue;
        worst_hadamard = std::max(
            worst_hadamard, hadamard_identity_residual(sc.plant, tr.x[i], sc.plant.theta_true, th_hat));
    }
    push(out, "run/hadamard-identity", worst_hadamard <= 1e-8, "worst residual " + fmt(worst_hadamard));

    // persistent-excitation verdict, when the scenario defines a query
    if (sc.expected.pe) {
        const PEReport pe = check_nonlinear_pe(sc.plant, tr, *sc.expected.pe);
        push(out, "run/pe-verdict-as-expected", pe.satisfied == sc.expected.pe_satisfied,
             std::string("satisfied=") + (pe.satisfied ? "yes" : "no") + " min margin " +
                 fmt(pe.min_margin));
    }

    return out;
}

bool all_pass(const std::vector<CheckResult>& results) {
    for (const CheckResult& r : results)
        if (!r.pass) return false;
    return true;
}

}  // namespace finform
