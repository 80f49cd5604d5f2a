#include "finform/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "finform/errors.hpp"

namespace finform {

EtaCurve EtaCurve::identity(double lo, double hi) {
    EtaCurve c;
    c.param_dim = 1;
    c.lambda_lo = lo;
    c.lambda_hi = hi;
    c.eta = [](double lam, Vec& out) { out.assign(1, lam); };
    return c;
}

AssumptionReport verify_assumption(const Plant& plant, const EtaCurve& curve, double delta_cap,
                                   const std::vector<Vec>& theta_grid,
                                   const std::vector<double>& lambda_grid,
                                   const std::vector<Vec>& x_grid) {
    AssumptionReport rep;
    rep.requested_delta = delta_cap;
    rep.theta_grid_size = static_cast<int>(theta_grid.size());
    rep.lambda_grid_size = static_cast<int>(lambda_grid.size());
    rep.x_grid_size = static_cast<int>(x_grid.size());

    // curve samples and their f values are shared across all theta
    std::vector<Vec> eta_pts(lambda_grid.size());
    for (std::size_t j = 0; j < lambda_grid.size(); ++j) curve.eta(lambda_grid[j], eta_pts[j]);

    std::vector<Vec> f_eta(lambda_grid.size(), Vec(x_grid.size()));
    for (std::size_t j = 0; j < lambda_grid.size(); ++j)
        for (std::size_t m = 0; m < x_grid.size(); ++m)
            f_eta[j][m] = plant.eval_f_lie(x_grid[m], eta_pts[j]);

    double worst = 0.0;
    Vec worst_theta;
    Vec f_th(x_grid.size());
    for (const Vec& th : theta_grid) {
        for (std::size_t m = 0; m < x_grid.size(); ++m) f_th[m] = plant.eval_f_lie(x_grid[m], th);
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < lambda_grid.size(); ++j) {
            double sup = 0.0;
            for (std::size_t m = 0; m < x_grid.size(); ++m) {
                sup = std::max(sup, std::abs(f_th[m] - f_eta[j][m]));
                if (sup >= best) break;  // cannot improve this lambda
            }
            best = std::min(best, sup);
        }
        if (best > worst) {
            worst = best;
            worst_theta = th;
        }
    }
    rep.achieved_delta = worst;
    rep.worst_theta = worst_theta;
    rep.ok = worst <= delta_cap;
    return rep;
}

Vec lift_adaptation(const EtaCurve& curve, double scalar_theta_hat) {
    Vec out;
    curve.eta(scalar_theta_hat, out);
    return out;
}

EtaCurve build_grid_curve(const std::vector<Vec>& points, const std::vector<int>& weights,
                          double lambda_lo, double lambda_hi) {
    if (points.size() < 2) throw DegenerateGrid("build_grid_curve: need at least 2 grid points");
    if (weights.size() != points.size())
        throw std::invalid_argument("build_grid_curve: weights size mismatch");
    for (int w : weights)
        if (w < 1) throw std::invalid_argument("build_grid_curve: weights must be positive");

    bool distinct = false;
    for (std::size_t i = 1; i < points.size() && !distinct; ++i)
        for (std::size_t c = 0; c < points[i].size(); ++c)
            if (points[i][c] != points[0][c]) {
                distinct = true;
                break;
            }
    if (!distinct) throw DegenerateGrid("build_grid_curve: all grid points identical");

    // smooth weighted round-robin spreads the repeated visits evenly:
    // each step credits every point its weight, the richest point is taken
    // and debited by the weight total
    int total = 0;
    for (int w : weights) total += w;
    std::vector<long long> credit(weights.size(), 0);
    std::vector<Vec> knots;
    for (int step = 0; step < total; ++step) {
        int best = 0;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            credit[i] += weights[i];
            if (credit[i] > credit[static_cast<std::size_t>(best)]) best = static_cast<int>(i);
        }
        knots.push_back(points[static_cast<std::size_t>(best)]);
        credit[static_cast<std::size_t>(best)] -= total;
    }

    const std::size_t m = knots.size();
    const std::size_t d = points[0].size();
    EtaCurve c;
    c.param_dim = static_cast<int>(d);
    c.lambda_lo = lambda_lo;
    c.lambda_hi = lambda_hi;
    c.eta = [knots, m, d, lambda_lo, lambda_hi](double lam, Vec& out) {
        // periodic uniform Catmull-Rom through the knots
        double s = (lam - lambda_lo) / (lambda_hi - lambda_lo) * static_cast<double>(m);
        s -= std::floor(s / static_cast<double>(m)) * static_cast<double>(m);
        const std::size_t i1 = static_cast<std::size_t>(s) % m;
        const double u = s - std::floor(s);
        const std::size_t i0 = (i1 + m - 1) % m;
        const std::size_t i2 = (i1 + 1) % m;
        const std::size_t i3 = (i1 + 2) % m;
        out.resize(d);
        const double u2 = u * u, u3 = u2 * u;
        for (std::size_t cdim = 0; cdim < d; ++cdim) {
            const double p0 = knots[i0][cdim], p1 = knots[i1][cdim], p2 = knots[i2][cdim],
                         p3 = knots[i3][cdim];
            out[cdim] = 0.5 * ((2.0 * p1) + (-p0 + p2) * u +
                               (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * u2 +
                               (-p0 + 3.0 * p1 - 3.0 * p2 + p3) * u3);
        }
    };
    return c;
}

ProbeReport probe_curve_smooth(const EtaCurve& curve, double max_second_divided) {
    const int npts = curve.smoothness_grid;
    const double h = (curve.lambda_hi - curve.lambda_lo) / npts;
    Vec a, b, c;
    curve.eta(curve.lambda_lo, a);
    curve.eta(curve.lambda_lo + h, b);
    for (int i = 2; i <= npts; ++i) {
        curve.eta(curve.lambda_lo + i * h, c);
        for (std::size_t k = 0; k < a.size(); ++k) {
            const double sdd = (c[k] - 2.0 * b[k] + a[k]) / (h * h);
            if (!std::isfinite(sdd) || std::abs(sdd) > max_second_divided) {
                std::ostringstream os;
                os << "second divided difference " << sdd << " at lambda="
                   << curve.lambda_lo + (i - 1) * h;
                return {false, os.str()};
            }
        }
        a.swap(b);
        b.swap(c);
    }
    return {true, ""};
}

ProbeReport probe_curve_in_box(const EtaCurve& curve, const Box& box, double tol) {
    const int npts = curve.smoothness_grid;
    Vec p;
    for (int i = 0; i <= npts; ++i) {
        const double lam =
            curve.lambda_lo + (curve.lambda_hi - curve.lambda_lo) * i / npts;
        curve.eta(lam, p);
        if (!box.contains(p, tol)) {
            std::ostringstream os;
            os << "curve point outside parameter box at lambda=" << lam;
            return {false, os.str()};
        }
    }
    return {true, ""};
}

}  // namespace finform
