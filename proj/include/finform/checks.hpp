#pragma once

#include <string>
#include <vector>

#include "finform/scenarios.hpp"

namespace finform {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

/// Full property suite for one scenario: hypothesis probes, a closed-loop run,
/// and the theorem-level invariants measured on its trace.
std::vector<CheckResult> verify_scenario(const Scenario& sc, double t_end_override = 0.0);

bool all_pass(const std::vector<CheckResult>& results);

}  // namespace finform
