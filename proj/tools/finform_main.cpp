#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "finform/analysis.hpp"
#include "finform/checks.hpp"
#include "finform/config.hpp"
#include "finform/errors.hpp"
#include "finform/report.hpp"
#include "finform/scenarios.hpp"
#include "finform/svg.hpp"
#include "finform/trace_io.hpp"

namespace fs = std::filesystem;
using namespace finform;

namespace {

std::string resolve_out_dir(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;          // flags override env
    if (const char* env = std::getenv("FINFORM_OUT")) return env;
    return "out";
}

Scenario resolve_scenario(const std::string& name, const std::string& config_path) {
    if (!name.empty() && !config_path.empty())
        throw std::runtime_error("give either --scenario or --config, not both");
    if (!name.empty()) return find_scenario(name);
    if (!config_path.empty()) return load_scenario_config_file(config_path);
    throw std::runtime_error("one of --scenario or --config is required");
}

std::vector<Vec> default_theta_grid(const Plant& plant) {
    const int per_axis = plant.param_dim == 1 ? 41 : 21;
    return grid_points(plant.theta_domain, per_axis);
}

std::vector<Vec> default_x_grid(const Plant& plant) {
    return grid_points(plant.x_domain, plant.state_dim == 1 ? 201 : 41);
}

void write_plots(const std::string& dir, const Scenario& sc, const Trace& tr) {
    const std::size_t stride = std::max<std::size_t>(1, tr.size() / 8000);
    SvgSeries abs_psi;
    abs_psi.label = "|psi|";
    for (std::size_t i = 0; i < tr.size(); i += stride) {
        abs_psi.x.push_back(tr.t[i]);
        abs_psi.y.push_back(std::abs(tr.psi[i]));
    }
    SvgBand goal_band{0.0, sc.sim.dwell_radius, "#d4e9d4"};
    write_svg_plot(dir + "/psi.svg", "goal function along the run (" + sc.name + ")", "t",
                   "|psi|", {abs_psi}, {goal_band});

    // parameter estimate with the sampled equivalence-class band per component
    std::vector<SvgSeries> series;
    const char* colors[] = {"#1f6fb2", "#b2571f", "#3f9b42", "#8e44ad"};
    for (int c = 0; c < tr.theta_cols; ++c) {
        SvgSeries s;
        s.label = tr.theta_cols == 1 ? "theta_hat" : "theta_hat" + std::to_string(c);
        s.color = colors[c % 4];
        for (std::size_t i = 0; i < tr.size(); i += stride) {
            s.x.push_back(tr.t[i]);
            s.y.push_back(tr.theta_hat[i][static_cast<std::size_t>(c)]);
        }
        series.push_back(std::move(s));
    }
    std::vector<SvgBand> bands;
    if (tr.theta_cols == static_cast<int>(sc.plant.theta_true.size())) {
        const auto members = class_members(sc.plant, sc.plant.theta_true, sc.adapt.Delta,
                                           default_theta_grid(sc.plant), default_x_grid(sc.plant));
        for (int c = 0; c < tr.theta_cols; ++c) {
            double lo = 1e300, hi = -1e300;
            for (const Vec& m : members) {
                lo = std::min(lo, m[static_cast<std::size_t>(c)]);
                hi = std::max(hi, m[static_cast<std::size_t>(c)]);
            }
            if (lo <= hi) bands.push_back({lo, hi, "#efe3c8"});
        }
    }
    write_svg_plot(dir + "/theta.svg", "parameter estimate (" + sc.name + ")", "t", "theta_hat",
                   series, bands);
}

int cmd_simulate(const Scenario& sc_in, const std::string& out_flag, double dt, double t_end,
                 int stride) {
    Scenario sc = sc_in;
    if (dt > 0.0) sc.sim.dt = dt;
    if (t_end > 0.0) sc.sim.t_end = t_end;
    if (stride > 0) sc.sim.record_stride = stride;
    if (sc.sim.t_end < sc.sim.dt) {
        std::cerr << "error: t_end shorter than one dt step\n";
        return 1;
    }

    const std::string dir = resolve_out_dir(out_flag);
    fs::create_directories(dir);

    const SimResult res = sc.run();
    const DwellMetrics dwell =
        dwell_metrics(res.trace, sc.expected.epsilon, sc.phi.k, sc.adapt.Delta);
    const double oracle = differential_form_oracle(res.trace, sc.adapt, sc.phi);

    write_trace_csv_file(dir + "/trace.csv", res.trace);
    {
        std::ofstream os(dir + "/report.txt");
        os << format_run_report(sc, res, dwell, oracle);
    }
    write_plots(dir, sc, res.trace);
    std::cout << format_run_report(sc, res, dwell, oracle);

    if (res.diag.aborted) return 3;
    if (dwell.never_entered) return 2;
    return 0;
}

int cmd_verify(const std::string& name, bool all, double t_end) {
    std::vector<std::string> names;
    if (all) {
        names = scenario_names();
    } else if (!name.empty()) {
        names.push_back(find_scenario(name).name);
    } else {
        std::cerr << "error: verify needs --scenario <name> or --all\n";
        return 1;
    }
    bool ok = true;
    for (const std::string& n : names) {
        const Scenario& sc = find_scenario(n);
        std::cout << "== " << n << "\n";
        for (const CheckResult& r : verify_scenario(sc, t_end)) {
            std::cout << (r.pass ? "PASS " : "FAIL ") << r.name;
            if (!r.detail.empty()) std::cout << " (" << r.detail << ")";
            std::cout << "\n";
            ok = ok && r.pass;
        }
    }
    return ok ? 0 : 4;
}

int cmd_sweep(const Scenario& sc, const std::string& param, const std::vector<double>& values,
              const std::string& out_flag) {
    if (values.empty()) {
        std::cerr << "error: --values must not be empty\n";
        return 1;
    }
    const std::string dir = resolve_out_dir(out_flag);
    fs::create_directories(dir);
    std::ofstream os(dir + "/sweep.csv");
    char buf[160];

    if (param == "k") {
        os << "k,reached,t_enter,sup_u,sup_f\n";
        std::cout << "k,reached,t_enter,sup_u,sup_f\n";
        for (const SweepRow& row : non_domination_sweep(sc, values)) {
            std::snprintf(buf, sizeof(buf), "%.17g,%d,%.17g,%.17g,%.17g\n", row.k,
                          row.reached ? 1 : 0, row.t_enter, row.sup_u, row.sup_f);
            os << buf;
            std::cout << buf;
        }
        return 0;
    }
    if (param == "gamma" || param == "epsilon") {
        os << param << ",reached,t_enter,sup_u\n";
        std::cout << param << ",reached,t_enter,sup_u\n";
        for (double v : values) {
            Scenario run_sc = sc;
            if (param == "gamma") {
                run_sc.adapt.gamma = v;
            } else {
                run_sc.expected.epsilon = v;
                run_sc.adapt.delta0 = delta0_for(v, run_sc.phi.k);
                run_sc.adapt.filter = tune_filter(run_sc.adapt.delta0, run_sc.expected.beta1);
                run_sc.sim.dwell_radius = v + run_sc.adapt.Delta / run_sc.phi.k;
            }
            const SimResult res = run_sc.run();
            const DwellMetrics dm = dwell_metrics(res.trace, run_sc.expected.epsilon,
                                                  run_sc.phi.k, run_sc.adapt.Delta);
            std::snprintf(buf, sizeof(buf), "%.17g,%d,%.17g,%.17g\n", v, dm.settled ? 1 : 0,
                          dm.settled ? dm.t_settle : -1.0, res.diag.sup_u);
            os << buf;
            std::cout << buf;
        }
        return 0;
    }
    std::cerr << "error: unknown sweep parameter '" << param << "' (use k, gamma, epsilon)\n";
    return 1;
}

int cmd_check_pe(const Scenario& sc, double M, double T1, double epsilon,
                 const std::string& out_flag) {
    PEQuery q;
    if (sc.expected.pe) {
        q = *sc.expected.pe;
    } else {
        if (M <= 0.0 || T1 <= 0.0 || epsilon <= 0.0) {
            std::cerr << "error: scenario has no built-in PE query; --M, --T1 and --epsilon "
                         "are required\n";
            return 1;
        }
        q.Delta = sc.adapt.Delta;
        q.theta_grid = default_theta_grid(sc.plant);
        q.x_grid = default_x_grid(sc.plant);
    }
    if (M > 0.0) q.M = M;
    if (T1 > 0.0) q.T1 = T1;
    if (epsilon > 0.0) q.epsilon = epsilon;

    const SimResult res = sc.run();
    const PEReport rep = check_nonlinear_pe(sc.plant, res.trace, q);
    const std::string text = format_pe_report(rep, q);
    std::cout << text;
    const std::string dir = resolve_out_dir(out_flag);
    fs::create_directories(dir);
    std::ofstream os(dir + "/pe_report.txt");
    os << text;
    return rep.satisfied ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finform: finite-form non-dominating adaptive control, desk-scale simulator"};
    app.require_subcommand(1);

    std::string name, config_path, out_dir, param;
    double dt = 0.0, t_end = 0.0, M = 0.0, T1 = 0.0, epsilon = 0.0;
    int stride = 0;
    bool all = false;
    std::vector<double> values;

    CLI::App* sim = app.add_subcommand("simulate", "run a scenario, write trace/report/plots");
    sim->add_option("--scenario", name, "built-in scenario name");
    sim->add_option("--config", config_path, "scenario config file");
    sim->add_option("--out", out_dir, "output directory (overrides FINFORM_OUT)");
    sim->add_option("--dt", dt, "integration step override");
    sim->add_option("--t-end", t_end, "horizon override");
    sim->add_option("--record-stride", stride, "record every Nth step");

    CLI::App* ver = app.add_subcommand("verify", "run the property suite");
    ver->add_option("--scenario", name, "scenario to verify");
    ver->add_flag("--all", all, "verify every registered scenario");
    ver->add_option("--t-end", t_end, "verification horizon override");

    CLI::App* swp = app.add_subcommand("sweep", "parameter sweep, CSV table output");
    swp->add_option("--scenario", name, "base scenario")->required();
    swp->add_option("--param", param, "k | gamma | epsilon")->required();
    swp->add_option("--values", values, "sweep values")->required()->delimiter(',');
    swp->add_option("--out", out_dir, "output directory");

    CLI::App* pe = app.add_subcommand("check-pe", "persistent-excitation check on a fresh run");
    pe->add_option("--scenario", name, "scenario name")->required();
    pe->add_option("--M", M, "mismatch margin");
    pe->add_option("--T1", T1, "window length");
    pe->add_option("--epsilon", epsilon, "class neighborhood radius");
    pe->add_option("--out", out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (sim->parsed())
            return cmd_simulate(resolve_scenario(name, config_path), out_dir, dt, t_end, stride);
        if (ver->parsed()) return cmd_verify(name, all, t_end);
        if (swp->parsed()) return cmd_sweep(find_scenario(name), param, values, out_dir);
        if (pe->parsed()) return cmd_check_pe(find_scenario(name), M, T1, epsilon, out_dir);
    } catch (const ConfigError& e) {
        std::cerr << "config error at line " << e.line << ": " << e.what() << "\n";
        return 1;
    } catch (const UnknownScenario& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
