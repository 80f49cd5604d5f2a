#include <doctest.h>

#include <cmath>

#include "finform/errors.hpp"
#include "finform/reduction.hpp"
#include "finform/scenarios.hpp"

using namespace finform;

namespace {
std::vector<double> lambda_grid(const EtaCurve& c, int n) {
    std::vector<double> out;
    for (int i = 0; i < n; ++i)
        out.push_back(c.lambda_lo + (c.lambda_hi - c.lambda_lo) * i / n);
    return out;
}
}  // namespace

TEST_CASE("identity curve satisfies the assumption at level zero") {
    const Plant plant = find_scenario("gauss1d").plant;
    const EtaCurve curve = EtaCurve::identity(-2.0, 2.0);
    std::vector<Vec> theta_grid;
    for (int i = 0; i <= 20; ++i) theta_grid.push_back({-2.0 + 0.2 * i});
    std::vector<Vec> x_grid;
    for (int i = 0; i <= 60; ++i) x_grid.push_back({-3.0 + 0.1 * i});
    // lambda grid containing exactly the theta grid makes the minimum 0
    std::vector<double> lam;
    for (const Vec& th : theta_grid) lam.push_back(th[0]);
    const AssumptionReport rep = verify_assumption(plant, curve, 0.0, theta_grid, lam, x_grid);
    CHECK(rep.ok);
    CHECK(rep.achieved_delta == 0.0);
}

TEST_CASE("slice curve through the true plane: achieved level zero") {
    // f(x, theta) = exp(-(x - th0)^2) * th1 with th1 pinned to 1
    Plant p;
    p.state_dim = 1;
    p.param_dim = 2;
    p.f_lie = [](const Vec& x, const Vec& th) {
        return std::exp(-(x[0] - th[0]) * (x[0] - th[0])) * th[1];
    };
    p.f_field = [&](const Vec&, const Vec&, Vec& out) { out.assign(1, 0.0); };
    p.psi = [](const Vec& x) { return x[0]; };
    p.grad_psi = [](const Vec&, Vec& out) { out.assign(1, 1.0); };
    p.g_field = [](const Vec&, Vec& out) { out.assign(1, 1.0); };
    p.theta_true = {0.3, 1.0};
    p.theta_domain = {{-1.0, 1.0}, {1.0, 1.0}};

    EtaCurve curve;
    curve.param_dim = 2;
    curve.lambda_lo = -1.0;
    curve.lambda_hi = 1.0;
    curve.eta = [](double lam, Vec& out) { out.assign({lam, 1.0}); };

    std::vector<Vec> theta_grid;
    for (int i = 0; i <= 10; ++i) theta_grid.push_back({-1.0 + 0.2 * i, 1.0});
    std::vector<double> lam;
    for (const Vec& th : theta_grid) lam.push_back(th[0]);
    std::vector<Vec> x_grid;
    for (int i = 0; i <= 40; ++i) x_grid.push_back({-2.0 + 0.1 * i});
    const AssumptionReport rep = verify_assumption(p, curve, 0.0, theta_grid, lam, x_grid);
    CHECK(rep.ok);
    CHECK(rep.achieved_delta == 0.0);
}

TEST_CASE("lissajous curve approximates the parameter square") {
    const Scenario sc = find_scenario("lissajous2d");
    REQUIRE(sc.eta.has_value());
    const std::vector<Vec> theta_grid = grid_points(sc.plant.theta_domain, 5);
    std::vector<Vec> x_grid;
    for (int i = 0; i <= 100; ++i) x_grid.push_back({-2.0 + 0.04 * i});
    const AssumptionReport rep =
        verify_assumption(sc.plant, *sc.eta, *sc.expected.assumption_delta, theta_grid,
                          lambda_grid(*sc.eta, 256), x_grid);
    CHECK(rep.ok);
    CHECK(rep.achieved_delta > 0.0);
    CHECK(rep.achieved_delta <= *sc.expected.assumption_delta);
}

TEST_CASE("lift_adaptation maps the scalar estimate through the curve") {
    CHECK(lift_adaptation(EtaCurve::identity(-1.0, 1.0), 0.3) == Vec{0.3});

    EtaCurve seg;
    seg.param_dim = 2;
    seg.lambda_lo = 0.0;
    seg.lambda_hi = 1.0;
    seg.eta = [](double lam, Vec& out) { out.assign({lam, 1.0 - lam}); };
    const Vec v = lift_adaptation(seg, 0.25);
    CHECK(v[0] == doctest::Approx(0.25));
    CHECK(v[1] == doctest::Approx(0.75));
    CHECK(lift_adaptation(seg, 0.0)[0] == 0.0);
    CHECK(lift_adaptation(seg, 1.0)[0] == 1.0);
}

TEST_CASE("grid curve: smooth closed interpolation") {
    const std::vector<Vec> pts = {{-0.5, -0.5}, {0.5, 0.5}};
    const EtaCurve c = build_grid_curve(pts, {1, 1});
    CHECK(probe_curve_smooth(c).ok);
    CHECK(probe_curve_in_box(c, Box{{-1.0, -1.0}, {1.0, 1.0}}, 0.3).ok);
    // passes through both anchors somewhere along the period
    double best0 = 1e9, best1 = 1e9;
    Vec p;
    for (int i = 0; i < 2048; ++i) {
        c.eta(c.lambda_lo + (c.lambda_hi - c.lambda_lo) * i / 2048.0, p);
        best0 = std::min(best0, std::hypot(p[0] + 0.5, p[1] + 0.5));
        best1 = std::min(best1, std::hypot(p[0] - 0.5, p[1] - 0.5));
    }
    CHECK(best0 < 1e-6);
    CHECK(best1 < 1e-6);
}

TEST_CASE("grid curve weights modulate visit frequency") {
    // 3x3 grid, center weighted 8: the curve must dip toward the center
    // at least 8 times per period
    std::vector<Vec> pts;
    std::vector<int> weights;
    for (int i = -1; i <= 1; ++i)
        for (int j = -1; j <= 1; ++j) {
            pts.push_back({0.5 * i, 0.5 * j});
            weights.push_back((i == 0 && j == 0) ? 8 : 1);
        }
    const EtaCurve c = build_grid_curve(pts, weights);
    const int n = 8192;
    std::vector<double> dist(static_cast<std::size_t>(n));
    Vec p;
    for (int i = 0; i < n; ++i) {
        c.eta(c.lambda_lo + (c.lambda_hi - c.lambda_lo) * i / n, p);
        dist[static_cast<std::size_t>(i)] = std::hypot(p[0], p[1]);
    }
    int minima = 0;
    for (int i = 0; i < n; ++i) {
        const double prev = dist[static_cast<std::size_t>((i + n - 1) % n)];
        const double next = dist[static_cast<std::size_t>((i + 1) % n)];
        const double cur = dist[static_cast<std::size_t>(i)];
        if (cur < prev && cur <= next && cur < 0.25) ++minima;
    }
    CHECK(minima >= 8);
}

TEST_CASE("degenerate grids are rejected") {
    CHECK_THROWS_AS(build_grid_curve({{1.0, 1.0}}, {3}), DegenerateGrid);
    CHECK_THROWS_AS(build_grid_curve({{1.0, 1.0}, {1.0, 1.0}, {1.0, 1.0}}, {1, 1, 1}),
                    DegenerateGrid);
}
