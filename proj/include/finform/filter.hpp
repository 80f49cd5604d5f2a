#pragma once

#include <utility>

namespace finform {

/// Second-order derivative-estimating filter
///
///   xi1' = xi2 + b1*psi
///   xi2' = a1*xi1 + a2*xi2 + b2*psi
///   y    = c1*xi1
///
/// With the tuning c1*b1 = -a1, b2 = a2*b1 the output y tracks d(psi)/dt with
/// asymptotic error |a2*beta1/a1| where beta1 bounds |psi''|.
struct FilterConfig {
    double a1 = -1.0;
    double a2 = -1.0;
    double b1 = 1.0;
    double b2 = -1.0;
    double c1 = 1.0;

    /// Slowest decay rate of the companion matrix [[0,1],[a1,a2]].
    /// For the complex-pair case this is |a2|/2.
    double decay_rate() const;
    /// 10 / decay_rate: the transient horizon used by the property suites.
    double transient_horizon() const { return 10.0 / decay_rate(); }

    bool tuning_identities_hold() const { return c1 * b1 == -a1 && b2 == a2 * b1; }
    bool is_hurwitz() const { return a1 < 0.0 && a2 < 0.0; }
};

struct FilterState {
    double xi1 = 0.0;
    double xi2 = 0.0;

    double alpha(const FilterConfig& cfg) const { return cfg.c1 * xi1; }

    /// State placed at the filter equilibrium for a frozen input value.
    static FilterState equilibrium(const FilterConfig& cfg, double psi_val) {
        return FilterState{0.0, -cfg.b1 * psi_val};
    }
};

/// Right-hand side (xi1', xi2') for input psi.
std::pair<double, double> filter_rhs(const FilterConfig& cfg, const FilterState& s, double psi_val);

/// Asymptotic derivative-estimation error bound |a2*beta1/a1| (transient excluded).
double filter_error_bound(const FilterConfig& cfg, double beta1);

/// Deterministic tuning rule: b1 = 1, a2 = -1, a1 = -max(4*beta1/delta0, 1),
/// which puts the asymptotic bound at or below delta0/4.
FilterConfig tune_filter(double delta0, double beta1);

}  // namespace finform
