#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "finform/scenarios.hpp"
#include "finform/sim.hpp"

using namespace finform;

TEST_CASE("rk4_step accuracy on the decay equation") {
    auto rhs = [](double, const Vec& s, Vec& out) { out = {-s[0]}; };
    const Vec next = rk4_step(rhs, {1.0}, 0.0, 0.1);
    CHECK(next[0] == doctest::Approx(0.9048375).epsilon(1e-9));
    CHECK(std::abs(next[0] - std::exp(-0.1)) < 2e-7);
}

TEST_CASE("rk4_step trivial fields") {
    auto zero = [](double, const Vec&, Vec& out) { out = {0.0}; };
    CHECK(rk4_step(zero, {0.7}, 0.0, 0.3)[0] == 0.7);
    auto one = [](double, const Vec&, Vec& out) { out = {1.0}; };
    CHECK(rk4_step(one, {0.25}, 0.0, 0.5)[0] == 0.75);  // polynomial exactness
}

TEST_CASE("locate_event bisection") {
    auto g = [](double t) { return t - 1.25; };  // linear crossing
    auto hit = locate_event(g, 1.2, 1.3, 1e-6);
    REQUIRE(hit.has_value());
    CHECK(std::abs(*hit - 1.25) <= 1e-6);

    auto tangent = [](double t) { return (t - 1.25) * (t - 1.25); };  // touches zero
    CHECK_FALSE(locate_event(tangent, 1.2, 1.3, 1e-6).has_value());

    auto positive = [](double) { return 2.0; };
    CHECK_FALSE(locate_event(positive, 0.0, 1.0, 1e-6).has_value());
}

TEST_CASE("dormant fixed point: exact estimate, no events") {
    Scenario sc = find_scenario("gauss1d");
    // start inside the band with theta_hat(t0) = theta_true
    sc.sim.x0 = {0.01};
    sc.sim.t_end = 10.0;
    sc.adapt.theta0_init = std::asin(0.35);  // lambda(s) = 2 sin s = 0.7
    const SimResult res = sc.run();
    CHECK_FALSE(res.diag.aborted);
    CHECK(res.diag.event_count == 0);
    for (std::size_t i = 0; i < res.trace.size(); ++i) {
        CHECK(res.trace.theta_hat[i][0] == doctest::Approx(0.7).epsilon(1e-12));
        CHECK(res.trace.s_delta[i] == 0);
        CHECK(res.trace.theta0[i] == res.trace.theta0[0]);
    }
}

TEST_CASE("simulate validates its configuration") {
    Scenario sc = find_scenario("gauss1d");
    SimConfig bad = sc.sim;
    bad.dt = 0.1;
    bad.t_end = 0.05;  // no full step fits
    CHECK_THROWS_AS(sc.run(bad), std::invalid_argument);

    bad = sc.sim;
    bad.x0 = {7.5};  // outside the admissible initial-condition box
    CHECK_THROWS_AS(sc.run(bad), std::invalid_argument);

    bad = sc.sim;
    bad.event_tol = bad.dt;
    CHECK_THROWS_AS(sc.run(bad), std::invalid_argument);
}

TEST_CASE("non-finite states abort with the last good trace") {
    Scenario sc = find_scenario("gauss1d");
    // hostile plant: the vector field explodes while the control model sees
    // nothing to cancel, so x' = exp(x^2) - x escapes in finite time
    sc.plant.f_field = [](const Vec& x, const Vec&, Vec& out) {
        out.assign(1, std::exp(x[0] * x[0]));
    };
    sc.plant.f_lie = [](const Vec&, const Vec&) { return 0.0; };
    sc.plant.f_lie_dtheta = nullptr;
    sc.sim.t_end = 50.0;
    sc.sim.x0 = {2.5};
    const SimResult res = sc.run();
    CHECK(res.diag.aborted);
    CHECK(res.trace.size() > 0);
}

TEST_CASE("identical configurations give bit-identical traces") {
    Scenario sc = find_scenario("gauss1d");
    sc.sim.t_end = 5.0;
    const SimResult a = sc.run();
    const SimResult b = sc.run();
    REQUIRE(a.trace.size() == b.trace.size());
    for (std::size_t i = 0; i < a.trace.size(); ++i) {
        CHECK(a.trace.psi[i] == b.trace.psi[i]);
        CHECK(a.trace.theta0[i] == b.trace.theta0[i]);
        CHECK(a.trace.u[i] == b.trace.u[i]);
    }
    REQUIRE(a.trace.events.size() == b.trace.events.size());
    for (std::size_t i = 0; i < a.trace.events.size(); ++i)
        CHECK(a.trace.events[i].t == b.trace.events[i].t);
}

TEST_CASE("short noisy run: alternation, continuity, dwell guard") {
    Scenario sc = find_scenario("gauss1d_noise");
    sc.sim.t_end = 20.0;
    const SimResult res = sc.run();
    CHECK_FALSE(res.diag.aborted);
    REQUIRE(res.trace.events.size() >= 2);
    for (std::size_t i = 1; i < res.trace.events.size(); ++i) {
        CHECK(res.trace.events[i].kind != res.trace.events[i - 1].kind);
        CHECK(res.trace.events[i].t > res.trace.events[i - 1].t);
        // minimum dwell of one integration step between localized events
        CHECK(res.trace.events[i].t - res.trace.events[i - 1].t >= sc.sim.dt * 0.99);
    }
    for (const SwitchEvent& ev : res.trace.events)
        CHECK(std::abs(ev.theta0_after - ev.theta0_before) < 1e-8);
    CHECK(res.diag.max_error_model_residual <= 1e-9);
}

TEST_CASE("recording stride subsamples uniformly") {
    Scenario sc = find_scenario("gauss1d");
    sc.sim.t_end = 2.0;
    sc.sim.record_stride = 10;
    const SimResult res = sc.run();
    REQUIRE(res.trace.size() == 201);
    CHECK(res.trace.t[1] == doctest::Approx(0.01));
    CHECK(res.trace.t.back() == doctest::Approx(2.0));
}
