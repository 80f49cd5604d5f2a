#include "finform/scenarios.hpp"

#include <cmath>

#include "finform/analysis.hpp"
#include "finform/errors.hpp"

namespace finform {

namespace {

Plant make_gauss_plant(double theta_true) {
    Plant p;
    p.state_dim = 1;
    p.param_dim = 1;
    p.f_field = [](const Vec& x, const Vec& th, Vec& out) {
        out.assign(1, std::exp(-(x[0] - th[0]) * (x[0] - th[0])));
    };
    p.g_field = [](const Vec&, Vec& out) { out.assign(1, 1.0); };
    p.psi = [](const Vec& x) { return x[0]; };
    p.grad_psi = [](const Vec&, Vec& out) { out.assign(1, 1.0); };
    p.f_lie = [](const Vec& x, const Vec& th) {
        return std::exp(-(x[0] - th[0]) * (x[0] - th[0]));
    };
    p.f_lie_dtheta = [](const Vec& x, const Vec& th, Vec& out) {
        const double d = x[0] - th[0];
        out.assign(1, 2.0 * d * std::exp(-d * d));
    };
    p.theta_true = {theta_true};
    p.theta_domain = {{-2.0}, {2.0}};
    p.x_domain = {{-3.0}, {3.0}};
    p.f_bound = 1.0;
    return p;
}

Scenario make_gauss1d() {
    Scenario sc;
    sc.name = "gauss1d";
    sc.plant = make_gauss_plant(0.7);
    sc.phi = FeedbackPhi::linear(1.0);
    sc.dist = Disturbance::zero();

    sc.expected.epsilon = 0.1;
    sc.expected.dwell_radius = 0.1;
    sc.expected.t_enter_max = 40.0;
    sc.expected.sup_x_max = 3.0;
    sc.expected.sup_theta0_max = 10.0;
    sc.expected.beta1 = 4.0;

    sc.adapt.gamma = 1.0;
    sc.adapt.delta0 = delta0_for(sc.expected.epsilon, sc.phi.k);
    sc.adapt.Delta = 0.0;
    sc.adapt.wrap = {-2.0, 2.0};
    sc.adapt.filter = tune_filter(sc.adapt.delta0, sc.expected.beta1);

    sc.sim.dt = 1e-3;
    sc.sim.t_end = 200.0;
    sc.sim.event_tol = 1e-12;
    sc.sim.x0 = {1.0};
    sc.sim.record_stride = 1;
    sc.sim.dwell_radius = sc.expected.dwell_radius;
    sc.sim.filter_ic_equilibrium = true;
    return sc;
}

Scenario make_gauss1d_noise() {
    Scenario sc = make_gauss1d();
    sc.name = "gauss1d_noise";
    sc.dist = Disturbance::sine(0.05, 3.0);
    sc.adapt.Delta = sc.dist.delta_bound;
    sc.expected.dwell_radius = sc.expected.epsilon + sc.adapt.Delta / sc.phi.k;
    sc.sim.dwell_radius = sc.expected.dwell_radius;
    return sc;
}

Scenario make_gauss1d_pe() {
    Scenario sc;
    sc.name = "gauss1d_pe";
    sc.plant = make_gauss_plant(0.0);
    sc.phi = FeedbackPhi::linear(1.0);
    sc.dist = Disturbance::sine(0.02, 1.3);  // shaped reference keeping windows informative

    sc.expected.epsilon = 0.04;
    sc.expected.t_enter_max = 60.0;
    sc.expected.sup_x_max = 3.0;
    sc.expected.sup_theta0_max = 10.0;
    sc.expected.beta1 = 10.0;

    sc.adapt.gamma = 2.0;
    sc.adapt.delta0 = delta0_for(sc.expected.epsilon, sc.phi.k);  // 0.01
    sc.adapt.Delta = sc.dist.delta_bound;
    sc.adapt.wrap = {-2.0, 2.0};
    sc.adapt.filter = tune_filter(sc.adapt.delta0, sc.expected.beta1);

    sc.expected.dwell_radius = sc.expected.epsilon + sc.adapt.Delta / sc.phi.k;

    PEQuery q;
    q.M = 0.15;
    q.T1 = 10.0;
    q.epsilon = 0.5;
    q.Delta = sc.adapt.Delta;
    for (int i = 0; i <= 40; ++i) q.theta_grid.push_back({-2.0 + 0.1 * i});
    for (int i = 0; i <= 600; ++i) q.x_grid.push_back({-3.0 + 0.01 * i});
    sc.expected.pe = q;
    sc.expected.pe_satisfied = true;

    sc.sim.dt = 1e-3;
    sc.sim.t_end = 120.0;
    sc.sim.event_tol = 1e-12;
    sc.sim.x0 = {1.0};
    sc.sim.record_stride = 1;
    sc.sim.dwell_radius = sc.expected.dwell_radius;
    sc.sim.filter_ic_equilibrium = true;
    return sc;
}

Scenario make_sincos2d() {
    Scenario sc;
    sc.name = "sincos2d";

    Plant p;
    p.state_dim = 1;
    p.param_dim = 2;
    auto f = [](double x, double th1, double th2) {
        const double xs = std::tanh(x);
        return std::sin(th1) * xs + 0.5 * std::cos(th2 * xs);
    };
    p.f_field = [f](const Vec& x, const Vec& th, Vec& out) { out.assign(1, f(x[0], th[0], th[1])); };
    p.g_field = [](const Vec&, Vec& out) { out.assign(1, 1.0); };
    p.psi = [](const Vec& x) { return x[0]; };
    p.grad_psi = [](const Vec&, Vec& out) { out.assign(1, 1.0); };
    p.f_lie = [f](const Vec& x, const Vec& th) { return f(x[0], th[0], th[1]); };
    p.f_lie_dtheta = [](const Vec& x, const Vec& th, Vec& out) {
        const double xs = std::tanh(x[0]);
        out.assign(2, 0.0);
        out[0] = std::cos(th[0]) * xs;
        out[1] = -0.5 * std::sin(th[1] * xs) * xs;
    };
    const double pi = 3.14159265358979323846;
    p.theta_true = {0.8, 1.5};
    p.theta_domain = {{-pi, 1.5}, {pi, 1.5}};  // theta2 pinned to the true slice
    p.x_domain = {{-3.0}, {3.0}};
    p.f_bound = 1.5;
    sc.plant = p;

    sc.phi = FeedbackPhi::linear(1.0);
    sc.dist = Disturbance::zero();

    sc.expected.epsilon = 0.1;
    sc.expected.dwell_radius = 0.1;
    sc.expected.t_enter_max = 40.0;
    sc.expected.sup_x_max = 3.0;
    sc.expected.sup_theta0_max = 10.0;
    sc.expected.beta1 = 4.0;
    // the goal point x = 0 carries no parameter information: the canonical
    // negative control for the persistent-excitation criterion
    PEQuery q;
    q.M = 0.15;
    q.T1 = 10.0;
    q.epsilon = 0.5;
    q.Delta = 1e-9;
    for (int i = 0; i <= 40; ++i) q.theta_grid.push_back({-pi + 2.0 * pi * i / 40.0, 1.5});
    q.theta_grid.push_back({0.8, 1.5});       // the true parameter and its
    q.theta_grid.push_back({pi - 0.8, 1.5});  // sine-mirror classmate
    for (int i = 0; i <= 600; ++i) q.x_grid.push_back({-3.0 + 0.01 * i});
    sc.expected.pe = q;
    sc.expected.pe_satisfied = false;

    sc.adapt.gamma = 1.0;
    sc.adapt.delta0 = delta0_for(sc.expected.epsilon, sc.phi.k);
    sc.adapt.Delta = 0.0;
    sc.adapt.wrap = {-pi, pi};
    sc.adapt.filter = tune_filter(sc.adapt.delta0, sc.expected.beta1);

    EtaCurve curve;  // the slice curve (lambda, 1.5)
    curve.param_dim = 2;
    curve.lambda_lo = -pi;
    curve.lambda_hi = pi;
    curve.eta = [](double lam, Vec& out) { out.assign({lam, 1.5}); };
    sc.eta = curve;
    sc.expected.assumption_delta = 1e-9;  // curve passes through the true slice

    sc.sim.dt = 1e-3;
    sc.sim.t_end = 200.0;
    sc.sim.event_tol = 1e-12;
    sc.sim.x0 = {1.0};
    sc.sim.record_stride = 1;
    sc.sim.dwell_radius = sc.expected.dwell_radius;
    sc.sim.filter_ic_equilibrium = true;
    return sc;
}

Scenario make_lissajous2d() {
    Scenario sc;
    sc.name = "lissajous2d";

    Plant p;
    p.state_dim = 1;
    p.param_dim = 2;
    auto f = [](double x, double th1, double th2) {
        return 0.6 * std::exp(-(x - th1) * (x - th1)) + 0.3 * std::sin(1.5 * th2) * std::tanh(x);
    };
    p.f_field = [f](const Vec& x, const Vec& th, Vec& out) { out.assign(1, f(x[0], th[0], th[1])); };
    p.g_field = [](const Vec&, Vec& out) { out.assign(1, 1.0); };
    p.psi = [](const Vec& x) { return x[0]; };
    p.grad_psi = [](const Vec&, Vec& out) { out.assign(1, 1.0); };
    p.f_lie = [f](const Vec& x, const Vec& th) { return f(x[0], th[0], th[1]); };
    p.f_lie_dtheta = [](const Vec& x, const Vec& th, Vec& out) {
        const double d = x[0] - th[0];
        out.assign(2, 0.0);
        out[0] = 0.6 * 2.0 * d * std::exp(-d * d);
        out[1] = 0.3 * 1.5 * std::cos(1.5 * th[1]) * std::tanh(x[0]);
    };
    p.theta_true = {0.4, -0.5};
    p.theta_domain = {{-1.0, -1.0}, {1.0, 1.0}};
    p.x_domain = {{-3.0}, {3.0}};
    p.f_bound = 0.9;
    sc.plant = p;

    sc.phi = FeedbackPhi::linear(1.0);
    sc.dist = Disturbance::zero();

    const double two_pi = 6.283185307179586476925286766559;
    EtaCurve curve;  // 3:2 Lissajous sweep of the parameter square
    curve.param_dim = 2;
    curve.lambda_lo = 0.0;
    curve.lambda_hi = two_pi;
    curve.eta = [](double lam, Vec& out) { out.assign({std::sin(3.0 * lam), std::sin(2.0 * lam)}); };
    sc.eta = curve;

    sc.expected.epsilon = 0.1;
    sc.expected.t_enter_max = 40.0;
    sc.expected.sup_x_max = 3.0;
    sc.expected.sup_theta0_max = 10.0;
    sc.expected.beta1 = 4.0;
    sc.expected.assumption_delta = 0.11;  // grid-oracle achieved level, with headroom

    sc.adapt.gamma = 1.0;
    sc.adapt.delta0 = delta0_for(sc.expected.epsilon, sc.phi.k);
    sc.adapt.Delta = *sc.expected.assumption_delta;  // curve residual budget
    sc.adapt.wrap = {0.0, two_pi};
    sc.adapt.filter = tune_filter(sc.adapt.delta0, sc.expected.beta1);

    sc.expected.dwell_radius = sc.expected.epsilon + sc.adapt.Delta / sc.phi.k;

    sc.sim.dt = 1e-3;
    sc.sim.t_end = 200.0;
    sc.sim.event_tol = 1e-12;
    sc.sim.x0 = {1.0};
    sc.sim.record_stride = 1;
    sc.sim.dwell_radius = sc.expected.dwell_radius;
    sc.sim.filter_ic_equilibrium = true;
    return sc;
}

}  // namespace

std::function<void(double, Vec&)> Scenario::lift() const {
    if (!eta) return {};
    const EtaCurve curve = *eta;
    return [curve](double lam, Vec& out) { curve.eta(lam, out); };
}

SimResult Scenario::run() const { return run(sim); }

SimResult Scenario::run(const SimConfig& override_sim) const {
    return simulate(plant, phi, dist, adapt, override_sim, lift());
}

const std::vector<Scenario>& registry() {
    static const std::vector<Scenario> all = {
        make_gauss1d(), make_gauss1d_noise(), make_gauss1d_pe(), make_sincos2d(),
        make_lissajous2d()};
    return all;
}

const Scenario& find_scenario(const std::string& name) {
    for (const Scenario& sc : registry())
        if (sc.name == name) return sc;
    throw UnknownScenario("unknown scenario: " + name);
}

std::vector<std::string> scenario_names() {
    std::vector<std::string> out;
    for (const Scenario& sc : registry()) out.push_back(sc.name);
    return out;
}

}  // namespace finform
