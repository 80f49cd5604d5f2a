#include <doctest.h>

#include <cmath>

#include "finform/analysis.hpp"
#include "finform/scenarios.hpp"

using namespace finform;

TEST_CASE("differential-form oracle is zero on a dormant-only run") {
    Scenario sc = find_scenario("gauss1d");
    sc.sim.x0 = {0.01};
    sc.sim.t_end = 5.0;
    sc.adapt.theta0_init = std::asin(0.35);
    const SimResult res = sc.run();
    REQUIRE(res.diag.event_count == 0);
    CHECK(differential_form_oracle(res.trace, sc.adapt, sc.phi) == 0.0);
}

TEST_CASE("oracle integrand is linear in gamma") {
    Scenario sc = find_scenario("gauss1d");
    sc.sim.t_end = 8.0;
    const SimResult res = sc.run();
    const Vec one = integrate_differential_form(res.trace, sc.adapt.gamma, sc.phi);
    const Vec two = integrate_differential_form(res.trace, 2.0 * sc.adapt.gamma, sc.phi);
    for (std::size_t i = 0; i < one.size(); ++i) {
        const double inc1 = one[i] - one[0];
        const double inc2 = two[i] - two[0];
        CHECK(inc2 == doctest::Approx(2.0 * inc1).epsilon(1e-12));
    }
}

TEST_CASE("oracle rejects a mismatched gamma (mutation sensitivity)") {
    Scenario sc = find_scenario("gauss1d");
    sc.sim.t_end = 30.0;
    const SimResult res = sc.run();
    const double good = differential_form_oracle(res.trace, sc.adapt, sc.phi);
    CHECK(good <= 1e-4);
    AdaptConfig wrong = sc.adapt;
    wrong.gamma *= 2.0;
    CHECK(differential_form_oracle(res.trace, wrong, sc.phi) > 0.1);
}

TEST_CASE("hadamard factor closed forms") {
    Plant p;
    p.state_dim = 1;
    p.param_dim = 1;
    p.psi = [](const Vec& x) { return x[0]; };
    p.grad_psi = [](const Vec&, Vec& out) { out.assign(1, 1.0); };
    p.g_field = [](const Vec&, Vec& out) { out.assign(1, 1.0); };
    p.f_field = [](const Vec&, const Vec&, Vec& out) { out.assign(1, 0.0); };

    SUBCASE("f = theta^2 gives F = theta + theta_hat") {
        p.f_lie = [](const Vec&, const Vec& th) { return th[0] * th[0]; };
        p.f_lie_dtheta = [](const Vec&, const Vec& th, Vec& out) { out.assign(1, 2.0 * th[0]); };
        const Vec F = hadamard_factor(p, {0.0}, {1.7}, {-0.4});
        CHECK(F[0] == doctest::Approx(1.3).epsilon(1e-12));
        CHECK(hadamard_identity_residual(p, {0.0}, {1.7}, {-0.4}) <= 1e-12);
    }
    SUBCASE("finite-difference gradient fallback stays within the budget") {
        p.f_lie = [](const Vec&, const Vec& th) { return th[0] * th[0]; };
        CHECK(hadamard_identity_residual(p, {0.0}, {1.7}, {-0.4}) <= 1e-8);
    }
    SUBCASE("coincident arguments degenerate to the derivative") {
        p.f_lie = [](const Vec&, const Vec& th) { return th[0] * th[0]; };
        p.f_lie_dtheta = [](const Vec&, const Vec& th, Vec& out) { out.assign(1, 2.0 * th[0]); };
        const Vec F = hadamard_factor(p, {0.0}, {0.9}, {0.9});
        CHECK(F[0] == doctest::Approx(1.8).epsilon(1e-10));
        CHECK(hadamard_identity_residual(p, {0.0}, {0.9}, {0.9}) <= 1e-14);
    }
    SUBCASE("linear parametrization gives the constant regressor") {
        p.f_lie = [](const Vec& x, const Vec& th) { return th[0] * x[0]; };
        p.f_lie_dtheta = [](const Vec& x, const Vec&, Vec& out) { out.assign(1, x[0]); };
        const Vec Fa = hadamard_factor(p, {2.5}, {1.0}, {-1.0});
        const Vec Fb = hadamard_factor(p, {2.5}, {0.3}, {0.8});
        CHECK(Fa[0] == doctest::Approx(2.5).epsilon(1e-12));
        CHECK(Fb[0] == doctest::Approx(2.5).epsilon(1e-12));
    }
}

TEST_CASE("hadamard identity on the gauss benchmark, 64 quadrature points") {
    const Plant p = find_scenario("gauss1d").plant;
    for (double x : {-1.0, 0.0, 0.8, 2.0})
        for (double th_hat : {-1.5, 0.0, 0.69})
            CHECK(hadamard_identity_residual(p, {x}, p.theta_true, {th_hat}, 64) <= 1e-8);
}

TEST_CASE("dwell metrics on synthetic traces") {
    Trace tr;
    tr.state_dim = 1;
    tr.theta_cols = 1;
    auto add = [&](double t, double psi) {
        tr.t.push_back(t);
        tr.psi.push_back(psi);
    };
    SUBCASE("identically zero enters at t0 and stays") {
        for (int i = 0; i < 10; ++i) add(0.1 * i, 0.0);
        const DwellMetrics m = dwell_metrics(tr, 0.1, 1.0, 0.0);
        CHECK_FALSE(m.never_entered);
        CHECK(m.t_enter == 0.0);
        CHECK(m.stays);
    }
    SUBCASE("re-exit flips stays") {
        add(0.0, 1.0);
        add(0.1, 0.05);
        add(0.2, 0.5);
        add(0.3, 0.02);
        const DwellMetrics m = dwell_metrics(tr, 0.1, 1.0, 0.0);
        CHECK_FALSE(m.never_entered);
        CHECK(m.t_enter == doctest::Approx(0.1));
        CHECK_FALSE(m.stays);
        CHECK(m.max_excursion_after == doctest::Approx(0.5));
    }
    SUBCASE("radius below the trajectory floor never enters") {
        for (int i = 0; i < 10; ++i) add(0.1 * i, 0.2);
        CHECK(dwell_metrics(tr, 0.1, 1.0, 0.0).never_entered);
    }
}

TEST_CASE("oversized band freezes the estimate short of the goal set") {
    // negative control: delta0 far above the k*eps/3 ceiling parks |psi|
    // around 0.2, so the eps = 0.1 target set is never reached
    Scenario sc = find_scenario("gauss1d");
    sc.adapt.delta0 = 0.5;
    sc.sim.t_end = 30.0;
    sc.sim.record_stride = 10;
    const SimResult res = sc.run();
    CHECK_FALSE(res.diag.aborted);
    const DwellMetrics m = dwell_metrics(res.trace, 0.1, 1.0, 0.0);
    CHECK(m.never_entered);
    CHECK(res.diag.sup_theta0 < 5.0);  // bounded even though mis-tuned
}

TEST_CASE("delta0 rule stays inside the proof ceiling") {
    for (double k : {0.01, 0.1, 1.0, 3.0})
        for (double eps : {0.02, 0.1, 0.5}) {
            CHECK(delta0_for(eps, k) > 0.0);
            CHECK(delta0_for(eps, k) < k * eps / 3.0);
        }
}

TEST_CASE("parameter convergence is immediate for a dormant exact start") {
    Scenario sc = find_scenario("gauss1d");
    sc.sim.x0 = {0.01};
    sc.sim.t_end = 5.0;
    sc.adapt.theta0_init = std::asin(0.35);
    const SimResult res = sc.run();
    std::vector<Vec> theta_grid;
    for (int i = 0; i <= 40; ++i) theta_grid.push_back({-2.0 + 0.1 * i});
    std::vector<Vec> x_grid;
    for (int i = 0; i <= 120; ++i) x_grid.push_back({-3.0 + 0.05 * i});
    // Delta absorbs the float quantization of the 0.1-step grid around 0.7
    const ConvergenceReport rep =
        parameter_convergence(res.trace, sc.plant, 0.5, 1e-6, x_grid, theta_grid);
    CHECK(rep.converged);
    CHECK(rep.t_conv == 0.0);
    CHECK(rep.terminal_distance <= 1e-9);
}

TEST_CASE("gauss-legendre nodes integrate polynomials exactly") {
    std::vector<double> nodes, w;
    gauss_legendre_01(8, nodes, w);
    double sum = 0.0, cubic = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        sum += w[i];
        cubic += w[i] * nodes[i] * nodes[i] * nodes[i];
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(cubic == doctest::Approx(0.25).epsilon(1e-14));
}
