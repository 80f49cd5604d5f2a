#pragma once

#include <optional>
#include <string>
#include <vector>

#include "finform/adapt.hpp"
#include "finform/excitation.hpp"
#include "finform/plant.hpp"
#include "finform/reduction.hpp"
#include "finform/sim.hpp"

namespace finform {

/// Acceptance thresholds a scenario is expected to meet.
struct Expected {
    double epsilon = 0.1;        // requested goal-set radius
    double dwell_radius = 0.1;   // epsilon + Delta / k
    double t_enter_max = 100.0;  // ceiling on the time-to-enter
    double sup_x_max = 10.0;
    double sup_theta0_max = 50.0;
    double oracle_tol = 1e-4;   // differential-form cross-check budget
    double beta1 = 4.0;         // |psi''| bound used to tune the filter

    std::optional<PEQuery> pe;   // persistent-excitation query, when meaningful
    bool pe_satisfied = false;   // expected verdict for the query above
    std::optional<double> assumption_delta;  // curve-approximation level to verify
};

struct Scenario {
    std::string name;
    Plant plant;
    FeedbackPhi phi;
    Disturbance dist;
    AdaptConfig adapt;
    SimConfig sim;
    Expected expected;
    std::optional<EtaCurve> eta;  // present for lifted (d > 1) scenarios

    /// Scalar-to-parameter map used by the control law (identity when !eta).
    std::function<void(double, Vec&)> lift() const;
    SimResult run() const;
    SimResult run(const SimConfig& override_sim) const;
};

const std::vector<Scenario>& registry();
/// Throws UnknownScenario on a lookup miss.
const Scenario& find_scenario(const std::string& name);
std::vector<std::string> scenario_names();

}  // namespace finform
