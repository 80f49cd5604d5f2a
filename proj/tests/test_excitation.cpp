#include <doctest.h>

#include <cmath>

#include "finform/errors.hpp"
#include "finform/excitation.hpp"
#include "finform/scenarios.hpp"

using namespace finform;

namespace {

std::vector<Vec> x_grid_1d(double lo, double hi, double step) {
    std::vector<Vec> out;
    for (double v = lo; v <= hi + 1e-12; v += step) out.push_back({v});
    return out;
}

/// Synthetic trace carrying only what the excitation checks read.
Trace make_trace(const std::vector<Vec>& xs, double dt) {
    Trace tr;
    tr.state_dim = static_cast<int>(xs.front().size());
    tr.theta_cols = 1;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        tr.t.push_back(static_cast<double>(i) * dt);
        tr.x.push_back(xs[i]);
        tr.psi.push_back(0.0);
        tr.psi_dot_true.push_back(0.0);
        tr.u.push_back(0.0);
        tr.alpha.push_back(0.0);
        tr.theta0.push_back(0.0);
        tr.theta_hat.push_back({0.0});
        tr.s_delta.push_back(0);
        tr.theta_I.push_back(0.0);
        tr.c_theta.push_back(0.0);
        tr.event_flag.push_back(0);
    }
    return tr;
}

}  // namespace

TEST_CASE("class_distance basics on the gauss family") {
    const Plant plant = find_scenario("gauss1d").plant;
    const auto grid = x_grid_1d(-5.0, 5.0, 0.01);
    CHECK(class_distance(plant, {0.7}, {0.7}, grid) == 0.0);
    // frozen grid-oracle value: max at x = 0 equals 1 - exp(-9)
    const double d = class_distance(plant, {0.0}, {3.0}, grid);
    CHECK(d == doctest::Approx(0.9998765901959133).epsilon(1e-12));
    // symmetry
    CHECK(class_distance(plant, {3.0}, {0.0}, grid) == d);
}

TEST_CASE("class_distance triangle inequality on a sample") {
    const Plant plant = find_scenario("gauss1d").plant;
    const auto grid = x_grid_1d(-4.0, 4.0, 0.05);
    const Vec a{-0.5}, b{0.3}, c{1.1};
    const double ab = class_distance(plant, a, b, grid);
    const double bc = class_distance(plant, b, c, grid);
    const double ac = class_distance(plant, a, c, grid);
    CHECK(ac <= ab + bc + 1e-12);
}

TEST_CASE("sine parametrization has a non-singleton class") {
    Plant p;
    p.state_dim = 1;
    p.param_dim = 1;
    p.f_lie = [](const Vec& x, const Vec& th) { return std::sin(th[0]) * std::tanh(x[0]); };
    p.psi = [](const Vec& x) { return x[0]; };
    p.grad_psi = [](const Vec&, Vec& out) { out.assign(1, 1.0); };
    p.g_field = [](const Vec&, Vec& out) { out.assign(1, 1.0); };
    p.f_field = [](const Vec&, const Vec&, Vec& out) { out.assign(1, 0.0); };
    p.theta_true = {0.6};
    const double pi = 3.14159265358979323846;
    const auto grid = x_grid_1d(-3.0, 3.0, 0.05);
    CHECK(class_distance(p, {0.6}, {pi - 0.6}, grid) <= 1e-12);
    CHECK(class_distance(p, {0.6}, {0.9}, grid) > 0.1);
}

TEST_CASE("nonlinear PE on a constant trajectory at the bump peak") {
    const Plant plant = find_scenario("gauss1d_pe").plant;  // theta_true = 0
    const Trace tr = make_trace(std::vector<Vec>(3001, Vec{0.0}), 0.01);
    PEQuery q;
    q.M = 0.2;
    q.T1 = 5.0;
    q.epsilon = 0.5;
    q.Delta = 0.0;
    for (int i = 0; i <= 60; ++i) q.theta_grid.push_back({-3.0 + 0.1 * i});
    q.x_grid = x_grid_1d(-3.0, 3.0, 0.01);
    const PEReport rep = check_nonlinear_pe(plant, tr, q);
    CHECK(rep.satisfied);
    // closed-ball neighborhood: the first quantified grid point is 0.6,
    // so the margin is 1 - exp(-0.36)
    CHECK(rep.min_margin == doctest::Approx(1.0 - std::exp(-0.36)).epsilon(1e-12));
    CHECK(rep.class_grid_members.size() == 1);
}

TEST_CASE("parameter-independent dynamics are never exciting") {
    Plant p = find_scenario("gauss1d").plant;
    p.f_lie = [](const Vec&, const Vec&) { return 0.25; };
    const Trace tr = make_trace(std::vector<Vec>(2001, Vec{0.4}), 0.01);
    PEQuery q;
    q.M = 0.05;
    q.T1 = 2.0;
    q.epsilon = 0.1;
    q.Delta = 0.0;
    for (int i = 0; i <= 40; ++i) q.theta_grid.push_back({-2.0 + 0.1 * i});
    q.x_grid = x_grid_1d(-2.0, 2.0, 0.05);
    const PEReport rep = check_nonlinear_pe(p, tr, q);
    CHECK_FALSE(rep.satisfied);
    CHECK(rep.min_margin == 0.0);
}

TEST_CASE("margin above the attainable range is never satisfied") {
    const Plant plant = find_scenario("gauss1d").plant;
    std::vector<Vec> xs;
    for (int i = 0; i < 4001; ++i) xs.push_back({std::sin(0.01 * i)});
    const Trace tr = make_trace(xs, 0.01);
    PEQuery q;
    q.M = 1e9;
    q.T1 = 5.0;
    q.epsilon = 0.3;
    q.Delta = 0.0;
    for (int i = 0; i <= 40; ++i) q.theta_grid.push_back({-2.0 + 0.1 * i});
    q.x_grid = x_grid_1d(-2.0, 2.0, 0.05);
    CHECK_FALSE(check_nonlinear_pe(plant, tr, q).satisfied);
}

TEST_CASE("insufficient trace raises") {
    const Plant plant = find_scenario("gauss1d").plant;
    const Trace tr = make_trace(std::vector<Vec>(10, Vec{0.0}), 0.01);
    PEQuery q;
    q.T1 = 5.0;
    q.theta_grid.push_back({1.0});
    q.x_grid = x_grid_1d(-1.0, 1.0, 0.5);
    CHECK_THROWS_AS(check_nonlinear_pe(plant, tr, q), InsufficientTrace);
    CHECK_THROWS_AS(check_linear_pe(tr, 5.0, 0.1), InsufficientTrace);
}

TEST_CASE("linear PE: constant scalar signal") {
    const Trace tr = make_trace(std::vector<Vec>(2001, Vec{1.0}), 1e-3);
    CHECK(check_linear_pe(tr, 1.0, 0.9).satisfied);   // integral = 1 > 0.9
    CHECK_FALSE(check_linear_pe(tr, 1.0, 1.1).satisfied);
}

TEST_CASE("linear PE: rotating 2-d signal has Gram pi I per period") {
    const double two_pi = 6.283185307179586476925286766559;
    std::vector<Vec> xs;
    const double dt = two_pi / 6283.0;  // windows hold an exact period
    for (int i = 0; i <= 20000; ++i) xs.push_back({std::sin(i * dt), std::cos(i * dt)});
    const Trace tr = make_trace(xs, dt);
    const LinearPEReport a = check_linear_pe(tr, two_pi, 3.0);
    CHECK(a.satisfied);
    CHECK(a.min_eigenvalue == doctest::Approx(3.14159265358979).epsilon(1e-6));
    CHECK_FALSE(check_linear_pe(tr, two_pi, 3.15).satisfied);
}

TEST_CASE("linear PE: collinear components fail for any positive slack") {
    std::vector<Vec> xs;
    for (int i = 0; i <= 15000; ++i) xs.push_back({std::sin(i * 1e-3), std::sin(i * 1e-3)});
    const Trace tr = make_trace(xs, 1e-3);
    const LinearPEReport rep = check_linear_pe(tr, 6.3, 1e-6);
    CHECK_FALSE(rep.satisfied);
    CHECK(std::abs(rep.min_eigenvalue) < 1e-9);
}

TEST_CASE("linear PE implies the nonlinear margin for linear regressors") {
    // f(x, theta) = theta . x on the rotating trace; M = rho eps / T
    Plant p;
    p.state_dim = 2;
    p.param_dim = 2;
    p.f_lie = [](const Vec& x, const Vec& th) { return th[0] * x[0] + th[1] * x[1]; };
    p.psi = [](const Vec& x) { return x[0]; };
    p.grad_psi = [](const Vec&, Vec& out) { out.assign({1.0, 0.0}); };
    p.g_field = [](const Vec&, Vec& out) { out.assign({1.0, 0.0}); };
    p.f_field = [](const Vec&, const Vec&, Vec& out) { out.assign({0.0, 0.0}); };
    p.theta_true = {0.25, -0.25};
    p.theta_domain = {{-1.0, -1.0}, {1.0, 1.0}};

    const double two_pi = 6.283185307179586476925286766559;
    std::vector<Vec> xs;
    const double dt = 2e-3;
    for (int i = 0; i <= 12000; ++i) xs.push_back({std::sin(i * dt), std::cos(i * dt)});
    const Trace tr = make_trace(xs, dt);

    const double rho = 0.9 * 3.141592653589793;  // rho < T keeps the implication valid
    REQUIRE(check_linear_pe(tr, two_pi, rho).satisfied);

    PEQuery q;
    q.epsilon = 0.5;
    q.M = rho * q.epsilon / two_pi;
    q.T1 = two_pi;
    q.Delta = 0.0;
    for (int i = -4; i <= 4; ++i)
        for (int j = -4; j <= 4; ++j) q.theta_grid.push_back({0.25 * i, 0.25 * j});
    q.theta_grid.push_back(p.theta_true);
    for (const Vec& xv : {Vec{1.0, 0.0}, Vec{0.0, 1.0}, Vec{0.5, -0.5}}) q.x_grid.push_back(xv);
    CHECK(check_nonlinear_pe(p, tr, q).satisfied);
}

TEST_CASE("symmetric_min_eigenvalue on small matrices") {
    // [[2, 1], [1, 2]] has eigenvalues 1 and 3
    CHECK(symmetric_min_eigenvalue({2.0, 1.0, 1.0, 2.0}, 2) == doctest::Approx(1.0));
    CHECK(symmetric_min_eigenvalue({5.0}, 1) == doctest::Approx(5.0));
    // diag(3, -1, 2) rotated is still spectrum {-1, 2, 3}
    CHECK(symmetric_min_eigenvalue({3.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 2.0}, 3) ==
          doctest::Approx(-1.0));
}
