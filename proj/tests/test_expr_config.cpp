#include <doctest.h>

#include <cmath>
#include <sstream>

#include "finform/config.hpp"
#include "finform/errors.hpp"
#include "finform/expr.hpp"
#include "finform/scenarios.hpp"

using namespace finform;

TEST_CASE("expression evaluation over the fixed vocabulary") {
    const Vec x{1.0}, th{0.0};
    EvalCtx c;
    c.x = &x;
    c.th = &th;

    CHECK(Expr::parse("exp(-(x0-th0)^2)").eval(c) == doctest::Approx(std::exp(-1.0)));
    CHECK(Expr::parse("2 + 3*4").eval(c) == 14.0);
    CHECK(Expr::parse("(2+3)*4").eval(c) == 20.0);
    CHECK(Expr::parse("2^3^1").eval(c) == 8.0);
    CHECK(Expr::parse("-x0^2").eval(c) == -1.0);
    CHECK(Expr::parse("tanh(x0)").eval(c) == doctest::Approx(std::tanh(1.0)));
    CHECK(Expr::parse("gauss(x0-th0)").eval(c) == doctest::Approx(std::exp(-1.0)));
    CHECK(Expr::parse("cos(pi)").eval(c) == doctest::Approx(-1.0));
    CHECK(Expr::parse("1/4 + sin(0)").eval(c) == 0.25);

    EvalCtx tc;
    tc.t = 3.14159265358979323846 / 6.0;
    CHECK(Expr::parse("0.05*sin(3*t)").eval(tc) == doctest::Approx(0.05));
    EvalCtx pc;
    pc.psi = 2.0;
    CHECK(Expr::parse("psi*(2+psi)").eval(pc) == 8.0);
}

TEST_CASE("expression errors carry positions") {
    CHECK_THROWS_AS(Expr::parse("2+*3"), ExprError);
    CHECK_THROWS_AS(Expr::parse("foo(3)"), ExprError);
    CHECK_THROWS_AS(Expr::parse("xx"), ExprError);
    CHECK_THROWS_AS(Expr::parse("(1+2"), ExprError);
    CHECK_THROWS_AS(Expr::parse(""), ExprError);
    try {
        Expr::parse("1 + bogus");
    } catch (const ExprError& e) {
        CHECK(e.pos == 4);
    }
}

namespace {
const char* kGaussConfig = R"(
# hand-written replica of the gauss1d benchmark
[plant]
state_dim = 1
param_dim = 1
f0 = exp(-(x0 - th0)^2)
g0 = 1
psi = x0
theta_true = 0.7
theta_min = -2
theta_max = 2
x_min = -3
x_max = 3
f_bound = 1

[phi]
k = 1

[adapt]
gamma = 1

[expected]
epsilon = 0.1
beta1 = 4

[sim]
dt = 0.001
t_end = 5
event_tol = 1e-9
x0 = 1.0
filter_ic_equilibrium = true
)";
}  // namespace

TEST_CASE("expression-defined plant reproduces the built-in benchmark") {
    std::istringstream is(kGaussConfig);
    const Scenario sc = load_scenario_config(is);
    CHECK(sc.adapt.delta0 == doctest::Approx(0.025));
    CHECK(sc.adapt.filter.a1 == doctest::Approx(-640.0));

    const SimResult a = sc.run();
    Scenario builtin = find_scenario("gauss1d");
    builtin.sim.t_end = 5.0;
    const SimResult b = builtin.run();
    REQUIRE(a.trace.size() == b.trace.size());
    double sup = 0.0;
    for (std::size_t i = 0; i < a.trace.size(); ++i)
        sup = std::max(sup, std::abs(a.trace.psi[i] - b.trace.psi[i]));
    CHECK(sup <= 1e-6);  // finite-difference gradients vs analytic ones
}

TEST_CASE("builtin reference with overrides") {
    std::istringstream is("[plant]\nbuiltin = gauss1d\n[sim]\nt_end = 5\n");
    const Scenario sc = load_scenario_config(is);
    CHECK(sc.name == "gauss1d");
    CHECK(sc.sim.t_end == 5.0);
    CHECK(sc.plant.theta_true[0] == 0.7);
}

TEST_CASE("config errors carry line numbers") {
    auto load = [](const std::string& text) {
        std::istringstream is(text);
        return load_scenario_config(is);
    };
    // unknown key
    try {
        load("[plant]\nbuiltin = gauss1d\nbogus_key = 3\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.line == 3);
    }
    // unknown section
    CHECK_THROWS_AS(load("[nope]\nx = 1\n"), ConfigError);
    // malformed line
    try {
        load("[plant]\nbuiltin gauss1d\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.line == 2);
    }
    // key outside any section
    CHECK_THROWS_AS(load("dt = 1\n"), ConfigError);
    // duplicate key
    CHECK_THROWS_AS(load("[sim]\ndt = 1\ndt = 2\n"), ConfigError);
    // expression error inside a value
    try {
        load("[plant]\nstate_dim = 1\nparam_dim = 1\nf0 = exp((x0)\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.line == 4);
    }
    // validation: no full step fits
    CHECK_THROWS_AS(load("[plant]\nbuiltin = gauss1d\n[sim]\ndt = 0.1\nt_end = 0.05\n"),
                    ConfigError);
    // x0 dimensionality
    CHECK_THROWS_AS(load("[plant]\nbuiltin = gauss1d\n[sim]\nx0 = 1, 2\n"), ConfigError);
    // unknown builtin
    CHECK_THROWS_AS(load("[plant]\nbuiltin = nope\n"), UnknownScenario);
}

TEST_CASE("eta curves from config") {
    std::istringstream is(
        "[plant]\nbuiltin = lissajous2d\n[eta]\nname = lissajous\np = 3\nq = 2\n[sim]\nt_end = "
        "2\n");
    const Scenario sc = load_scenario_config(is);
    REQUIRE(sc.eta.has_value());
    Vec v;
    sc.eta->eta(0.5, v);
    CHECK(v[0] == doctest::Approx(std::sin(1.5)));
    CHECK(v[1] == doctest::Approx(std::sin(1.0)));

    std::istringstream is2(
        "[plant]\nbuiltin = lissajous2d\n[eta]\nname = grid\npoints = -0.5,-0.5; 0.5,0.5; "
        "-0.5,0.5\nweights = 1,1,2\n[sim]\nt_end = 2\n");
    const Scenario sc2 = load_scenario_config(is2);
    REQUIRE(sc2.eta.has_value());
    CHECK(sc2.eta->param_dim == 2);

    std::istringstream is3("[plant]\nbuiltin = gauss1d\n[eta]\nname = bogus\n");
    CHECK_THROWS_AS(load_scenario_config(is3), ConfigError);
}
