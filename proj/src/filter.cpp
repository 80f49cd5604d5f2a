#include "finform/filter.hpp"

#include <cmath>
#include <stdexcept>

namespace finform {

double FilterConfig::decay_rate() const {
    // companion matrix eigenvalues: (a2 +- sqrt(a2^2 + 4 a1)) / 2
    const double disc = a2 * a2 + 4.0 * a1;
    if (disc < 0.0) return -a2 / 2.0;
    const double r1 = (a2 + std::sqrt(disc)) / 2.0;
    return -r1;  // the slower (less negative) root
}

std::pair<double, double> filter_rhs(const FilterConfig& cfg, const FilterState& s, double psi_val) {
    return {s.xi2 + cfg.b1 * psi_val, cfg.a1 * s.xi1 + cfg.a2 * s.xi2 + cfg.b2 * psi_val};
}

double filter_error_bound(const FilterConfig& cfg, double beta1) {
    if (beta1 < 0.0) throw std::invalid_argument("filter_error_bound: beta1 must be >= 0");
    return std::abs(cfg.a2 * beta1 / cfg.a1);
}

FilterConfig tune_filter(double delta0, double beta1) {
    if (delta0 <= 0.0) throw std::invalid_argument("tune_filter: delta0 must be > 0");
    if (beta1 < 0.0) throw std::invalid_argument("tune_filter: beta1 must be >= 0");
    FilterConfig cfg;
    cfg.b1 = 1.0;
    cfg.a2 = -1.0;
    cfg.a1 = -std::max(4.0 * beta1 / delta0, 1.0);
    cfg.b2 = cfg.a2 * cfg.b1;
    cfg.c1 = -cfg.a1 / cfg.b1;
    return cfg;
}

}  // namespace finform
