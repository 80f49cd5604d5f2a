#include "finform/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <string_view>
#include <vector>

#include "finform/analysis.hpp"
#include "finform/errors.hpp"
#include "finform/expr.hpp"

namespace finform {

namespace {

struct Entry {
    std::string value;
    int line = 0;
    bool consumed = false;
};

using Section = std::map<std::string, Entry>;

struct RawConfig {
    std::map<std::string, Section> sections;

    Entry* find(const std::string& sec, const std::string& key) {
        auto s = sections.find(sec);
        if (s == sections.end()) return nullptr;
        auto k = s->second.find(key);
        if (k == s->second.end()) return nullptr;
        k->second.consumed = true;
        return &k->second;
    }
    bool has(const std::string& sec, const std::string& key) {
        auto s = sections.find(sec);
        return s != sections.end() && s->second.count(key) > 0;
    }
    void check_all_consumed() const {
        for (const auto& [sec, entries] : sections)
            for (const auto& [key, e] : entries)
                if (!e.consumed)
                    throw ConfigError(e.line, "unknown key '" + key + "' in section [" + sec + "]");
    }
};

RawConfig parse_raw(std::istream& is) {
    static const char* known_sections[] = {"plant", "phi", "disturbance", "adapt",
                                           "sim",   "eta", "expected"};
    RawConfig cfg;
    std::string line, section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::string_view sv(line);
        while (!sv.empty() && (sv.front() == ' ' || sv.front() == '\t')) sv.remove_prefix(1);
        if (sv.empty() || sv.front() == '#') continue;
        while (!sv.empty() && (sv.back() == ' ' || sv.back() == '\t' || sv.back() == '\r'))
            sv.remove_suffix(1);
        if (sv.front() == '[') {
            if (sv.back() != ']') throw ConfigError(lineno, "malformed section header");
            section = std::string(sv.substr(1, sv.size() - 2));
            bool known = false;
            for (const char* s : known_sections) known = known || section == s;
            if (!known) throw ConfigError(lineno, "unknown section [" + section + "]");
            continue;
        }
        const auto eq = sv.find('=');
        if (eq == std::string_view::npos) throw ConfigError(lineno, "expected 'key = value'");
        if (section.empty()) throw ConfigError(lineno, "key outside any section");
        std::string key(sv.substr(0, eq));
        std::string value(sv.substr(eq + 1));
        auto trim = [](std::string& s) {
            while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.erase(s.begin());
            while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.pop_back();
        };
        trim(key);
        trim(value);
        if (key.empty()) throw ConfigError(lineno, "empty key");
        if (cfg.sections[section].count(key))
            throw ConfigError(lineno, "duplicate key '" + key + "'");
        cfg.sections[section][key] = {value, lineno, false};
    }
    return cfg;
}

double parse_num(const Entry& e) {
    char* end = nullptr;
    const double v = std::strtod(e.value.c_str(), &end);
    if (end == e.value.c_str() || *end != '\0')
        throw ConfigError(e.line, "expected a decimal number, got '" + e.value + "'");
    return v;
}

int parse_int(const Entry& e) {
    const double v = parse_num(e);
    if (v != std::floor(v)) throw ConfigError(e.line, "expected an integer");
    return static_cast<int>(v);
}

bool parse_bool(const Entry& e) {
    if (e.value == "true" || e.value == "1") return true;
    if (e.value == "false" || e.value == "0") return false;
    throw ConfigError(e.line, "expected true/false");
}

Vec parse_list(const Entry& e) {
    Vec out;
    std::stringstream ss(e.value);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        char* end = nullptr;
        const double v = std::strtod(tok.c_str(), &end);
        if (end == tok.c_str()) throw ConfigError(e.line, "bad list element '" + tok + "'");
        out.push_back(v);
    }
    if (out.empty()) throw ConfigError(e.line, "empty list");
    return out;
}

Expr parse_expr_entry(const Entry& e) {
    try {
        return Expr::parse(e.value);
    } catch (const ExprError& ex) {
        throw ConfigError(e.line, "expression error at column " +
                                      std::to_string(ex.pos + 1) + ": " + ex.message);
    }
}

Plant build_expr_plant(RawConfig& raw) {
    Plant p;
    Entry* e = raw.find("plant", "state_dim");
    if (!e) throw ConfigError(0, "[plant] requires state_dim (or builtin = <name>)");
    p.state_dim = parse_int(*e);
    e = raw.find("plant", "param_dim");
    if (!e) throw ConfigError(0, "[plant] requires param_dim");
    p.param_dim = parse_int(*e);
    if (p.state_dim < 1 || p.state_dim > 8) throw ConfigError(e->line, "state_dim out of range");
    if (p.param_dim < 1 || p.param_dim > 8) throw ConfigError(e->line, "param_dim out of range");

    auto exprs = std::make_shared<std::vector<Expr>>();  // f0..f{n-1}, g0..g{n-1}
    for (int i = 0; i < p.state_dim; ++i) {
        Entry* fe = raw.find("plant", "f" + std::to_string(i));
        if (!fe) throw ConfigError(0, "[plant] missing f" + std::to_string(i));
        exprs->push_back(parse_expr_entry(*fe));
    }
    for (int i = 0; i < p.state_dim; ++i) {
        Entry* ge = raw.find("plant", "g" + std::to_string(i));
        if (!ge) throw ConfigError(0, "[plant] missing g" + std::to_string(i));
        exprs->push_back(parse_expr_entry(*ge));
    }
    Entry* pe = raw.find("plant", "psi");
    if (!pe) throw ConfigError(0, "[plant] missing psi");
    auto psi_expr = std::make_shared<Expr>(parse_expr_entry(*pe));

    const int n = p.state_dim;
    p.f_field = [exprs, n](const Vec& x, const Vec& th, Vec& out) {
        EvalCtx c;
        c.x = &x;
        c.th = &th;
        out.resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = (*exprs)[static_cast<std::size_t>(i)].eval(c);
    };
    p.g_field = [exprs, n](const Vec& x, Vec& out) {
        EvalCtx c;
        c.x = &x;
        out.resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
            out[static_cast<std::size_t>(i)] = (*exprs)[static_cast<std::size_t>(n + i)].eval(c);
    };
    p.psi = [psi_expr](const Vec& x) {
        EvalCtx c;
        c.x = &x;
        return psi_expr->eval(c);
    };
    // gradients by central differences for expression-defined plants
    p.grad_psi = [psi_expr, n](const Vec& x, Vec& out) {
        const double h = 1e-6;
        out.resize(static_cast<std::size_t>(n));
        Vec xx = x;
        EvalCtx c;
        c.x = &xx;
        for (int i = 0; i < n; ++i) {
            const std::size_t ii = static_cast<std::size_t>(i);
            const double save = xx[ii];
            xx[ii] = save + h;
            const double fp = psi_expr->eval(c);
            xx[ii] = save - h;
            const double fm = psi_expr->eval(c);
            xx[ii] = save;
            out[ii] = (fp - fm) / (2.0 * h);
        }
    };

    e = raw.find("plant", "theta_true");
    if (!e) throw ConfigError(0, "[plant] missing theta_true");
    p.theta_true = parse_list(*e);
    if (static_cast<int>(p.theta_true.size()) != p.param_dim)
        throw ConfigError(e->line, "theta_true size != param_dim");

    Entry* lo = raw.find("plant", "theta_min");
    Entry* hi = raw.find("plant", "theta_max");
    if (!lo || !hi) throw ConfigError(0, "[plant] missing theta_min/theta_max");
    p.theta_domain = {parse_list(*lo), parse_list(*hi)};
    if (p.theta_domain.lo.size() != static_cast<std::size_t>(p.param_dim) ||
        p.theta_domain.hi.size() != static_cast<std::size_t>(p.param_dim))
        throw ConfigError(lo->line, "theta_min/theta_max size != param_dim");

    lo = raw.find("plant", "x_min");
    hi = raw.find("plant", "x_max");
    if (!lo || !hi) throw ConfigError(0, "[plant] missing x_min/x_max");
    p.x_domain = {parse_list(*lo), parse_list(*hi)};
    if (p.x_domain.lo.size() != static_cast<std::size_t>(p.state_dim))
        throw ConfigError(lo->line, "x_min size != state_dim");

    if ((e = raw.find("plant", "f_bound"))) p.f_bound = parse_num(*e);
    if ((e = raw.find("plant", "lg_psi_floor"))) p.lg_psi_floor = parse_num(*e);
    return p;
}

EtaCurve build_eta(RawConfig& raw, const Scenario& sc) {
    Entry* ne = raw.find("eta", "name");
    if (!ne) throw ConfigError(0, "[eta] requires name");
    const double two_pi = 6.283185307179586476925286766559;
    if (ne->value == "identity") {
        return EtaCurve::identity(sc.adapt.wrap.theta_lo, sc.adapt.wrap.theta_hi);
    }
    if (ne->value == "lissajous") {
        EtaCurve c;
        c.param_dim = 2;
        c.lambda_lo = 0.0;
        c.lambda_hi = two_pi;
        double pf = 3.0, qf = 2.0, ax = 1.0, ay = 1.0, cx = 0.0, cy = 0.0;
        Entry* e;
        if ((e = raw.find("eta", "p"))) pf = parse_num(*e);
        if ((e = raw.find("eta", "q"))) qf = parse_num(*e);
        if ((e = raw.find("eta", "amp0"))) ax = parse_num(*e);
        if ((e = raw.find("eta", "amp1"))) ay = parse_num(*e);
        if ((e = raw.find("eta", "center0"))) cx = parse_num(*e);
        if ((e = raw.find("eta", "center1"))) cy = parse_num(*e);
        c.eta = [pf, qf, ax, ay, cx, cy](double lam, Vec& out) {
            out.assign({cx + ax * std::sin(pf * lam), cy + ay * std::sin(qf * lam)});
        };
        return c;
    }
    if (ne->value == "grid") {
        Entry* pe = raw.find("eta", "points");
        Entry* we = raw.find("eta", "weights");
        if (!pe || !we) throw ConfigError(ne->line, "[eta] grid requires points and weights");
        std::vector<Vec> pts;
        std::stringstream ss(pe->value);
        std::string tok;
        while (std::getline(ss, tok, ';')) {
            Entry tmp{tok, pe->line, true};
            pts.push_back(parse_list(tmp));
        }
        std::vector<int> weights;
        for (double w : parse_list(*we)) weights.push_back(static_cast<int>(w));
        return build_grid_curve(pts, weights);
    }
    throw ConfigError(ne->line, "unknown eta curve '" + ne->value + "'");
}

}  // namespace

Scenario load_scenario_config(std::istream& is) {
    RawConfig raw = parse_raw(is);

    Scenario sc;
    bool from_builtin = false;
    if (Entry* e = raw.find("plant", "builtin")) {
        sc = find_scenario(e->value);
        from_builtin = true;
    } else {
        sc.name = "config";
        sc.plant = build_expr_plant(raw);
        sc.phi = FeedbackPhi::linear(1.0);
        sc.dist = Disturbance::zero();
        sc.adapt.wrap = {sc.plant.theta_domain.lo[0], sc.plant.theta_domain.hi[0]};
        sc.sim.x0.assign(static_cast<std::size_t>(sc.plant.state_dim), 0.0);
    }

    Entry* e;
    if ((e = raw.find("phi", "k"))) {
        const double k = parse_num(*e);
        if (k <= 0.0) throw ConfigError(e->line, "phi gain k must be > 0");
        sc.phi = FeedbackPhi::linear(k);
    }
    if ((e = raw.find("phi", "expr"))) {
        auto ex = std::make_shared<Expr>(parse_expr_entry(*e));
        const double k = sc.phi.k;
        sc.phi.phi = [ex](double p) {
            EvalCtx c;
            c.psi = p;
            return ex->eval(c);
        };
        // primitive by fixed-order quadrature (vanishing at 0)
        sc.phi.antideriv = [ex](double p) {
            static std::vector<double> nodes, w;
            if (nodes.empty()) gauss_legendre_01(32, nodes, w);
            double acc = 0.0;
            EvalCtx c;
            for (std::size_t i = 0; i < nodes.size(); ++i) {
                c.psi = nodes[i] * p;
                acc += w[i] * ex->eval(c);
            }
            return acc * p;
        };
        sc.phi.k = k;
    }

    if ((e = raw.find("disturbance", "expr"))) {
        auto ex = std::make_shared<Expr>(parse_expr_entry(*e));
        sc.dist.upsilon = [ex](double t) {
            EvalCtx c;
            c.t = t;
            return ex->eval(c);
        };
    }
    const bool dist_given = raw.sections.count("disturbance") > 0;
    const bool eta_given = raw.sections.count("eta") > 0;
    if ((e = raw.find("disturbance", "delta_bound"))) sc.dist.delta_bound = parse_num(*e);
    if ((e = raw.find("disturbance", "dot_bound"))) sc.dist.upsilon_dot_bound = parse_num(*e);

    if ((e = raw.find("adapt", "gamma"))) sc.adapt.gamma = parse_num(*e);
    if ((e = raw.find("adapt", "delta0"))) sc.adapt.delta0 = parse_num(*e);
    if ((e = raw.find("adapt", "lambda_lo"))) sc.adapt.wrap.theta_lo = parse_num(*e);
    if ((e = raw.find("adapt", "lambda_hi"))) sc.adapt.wrap.theta_hi = parse_num(*e);
    if ((e = raw.find("adapt", "theta0_init"))) sc.adapt.theta0_init = parse_num(*e);
    if ((e = raw.find("adapt", "theta0_reflect_at"))) sc.adapt.theta0_reflect_at = parse_num(*e);

    if ((e = raw.find("expected", "epsilon"))) sc.expected.epsilon = parse_num(*e);
    if ((e = raw.find("expected", "t_enter_max"))) sc.expected.t_enter_max = parse_num(*e);
    if ((e = raw.find("expected", "sup_x_max"))) sc.expected.sup_x_max = parse_num(*e);
    if ((e = raw.find("expected", "sup_theta0_max"))) sc.expected.sup_theta0_max = parse_num(*e);
    if ((e = raw.find("expected", "beta1"))) sc.expected.beta1 = parse_num(*e);
    if ((e = raw.find("expected", "oracle_tol"))) sc.expected.oracle_tol = parse_num(*e);
    if ((e = raw.find("expected", "assumption_delta"))) sc.expected.assumption_delta = parse_num(*e);

    if (!from_builtin && !raw.has("adapt", "delta0"))
        sc.adapt.delta0 = delta0_for(sc.expected.epsilon, sc.phi.k);

    // filter: explicit coefficients win over the delta0/beta1 tuning rule
    if (raw.has("adapt", "a1")) {
        FilterConfig f;
        Entry *a1 = raw.find("adapt", "a1"), *a2 = raw.find("adapt", "a2"),
              *b1 = raw.find("adapt", "b1"), *b2 = raw.find("adapt", "b2"),
              *c1 = raw.find("adapt", "c1");
        if (!a1 || !a2 || !b1) throw ConfigError(0, "[adapt] explicit filter needs a1, a2, b1");
        f.a1 = parse_num(*a1);
        f.a2 = parse_num(*a2);
        f.b1 = parse_num(*b1);
        f.b2 = b2 ? parse_num(*b2) : f.a2 * f.b1;
        f.c1 = c1 ? parse_num(*c1) : -f.a1 / f.b1;
        if (!f.is_hurwitz() || f.b1 == 0.0)
            throw ConfigError(a1->line, "filter requires a1, a2 < 0 and b1 != 0");
        sc.adapt.filter = f;
    } else {
        sc.adapt.filter = tune_filter(sc.adapt.delta0, sc.expected.beta1);
    }

    if (eta_given) {
        sc.eta = build_eta(raw, sc);
        if (sc.eta->param_dim != sc.plant.param_dim)
            throw ConfigError(0, "[eta] curve dimension != plant param_dim");
    }

    // disturbance plus curve residual make up the algorithm's Delta budget
    if (!from_builtin || dist_given || eta_given) {
        double budget = sc.dist.delta_bound;
        if (sc.eta && sc.expected.assumption_delta) budget += *sc.expected.assumption_delta;
        sc.adapt.Delta = budget;
    }

    if ((e = raw.find("sim", "dt"))) sc.sim.dt = parse_num(*e);
    if ((e = raw.find("sim", "t_end"))) sc.sim.t_end = parse_num(*e);
    if ((e = raw.find("sim", "event_tol"))) sc.sim.event_tol = parse_num(*e);
    if ((e = raw.find("sim", "record_stride"))) sc.sim.record_stride = parse_int(*e);
    if ((e = raw.find("sim", "filter_ic_equilibrium")))
        sc.sim.filter_ic_equilibrium = parse_bool(*e);
    if ((e = raw.find("sim", "x0"))) {
        sc.sim.x0 = parse_list(*e);
        if (static_cast<int>(sc.sim.x0.size()) != sc.plant.state_dim)
            throw ConfigError(e->line, "x0 size != state_dim");
    }
    sc.expected.dwell_radius = sc.expected.epsilon + sc.adapt.Delta / sc.phi.k;
    sc.sim.dwell_radius = sc.expected.dwell_radius;

    if (sc.sim.dt <= 0.0) throw ConfigError(0, "sim.dt must be > 0");
    if (sc.sim.t_end < sc.sim.dt) throw ConfigError(0, "sim.t_end shorter than one dt step");
    if (sc.adapt.delta0 <= 0.0) throw ConfigError(0, "adapt.delta0 must be > 0");
    if (sc.adapt.gamma <= 0.0) throw ConfigError(0, "adapt.gamma must be > 0");

    raw.check_all_consumed();
    return sc;
}

Scenario load_scenario_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config: " + path);
    return load_scenario_config(is);
}

}  // namespace finform
