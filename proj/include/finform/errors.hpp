#pragma once

#include <stdexcept>
#include <string>

namespace finform {

/// Control direction |L_g psi| fell below the configured floor; the run aborts.
struct SingularControlDirection : std::runtime_error {
    explicit SingularControlDirection(const std::string& what) : std::runtime_error(what) {}
};

/// A state component became NaN/Inf during integration.
struct NonFiniteState : std::runtime_error {
    explicit NonFiniteState(const std::string& what) : std::runtime_error(what) {}
};

/// Two consecutive switching events of the same kind were requested.
struct EventOrderViolation : std::runtime_error {
    explicit EventOrderViolation(const std::string& what) : std::runtime_error(what) {}
};

/// Scenario name not present in the registry.
struct UnknownScenario : std::runtime_error {
    explicit UnknownScenario(const std::string& what) : std::runtime_error(what) {}
};

/// Grid-curve construction got indistinguishable anchor points.
struct DegenerateGrid : std::runtime_error {
    explicit DegenerateGrid(const std::string& what) : std::runtime_error(what) {}
};

/// Trace too short for the requested window analysis.
struct InsufficientTrace : std::runtime_error {
    explicit InsufficientTrace(const std::string& what) : std::runtime_error(what) {}
};

/// Scenario/config text failed to parse or validate; carries a line number when known.
struct ConfigError : std::runtime_error {
    int line = 0;
    ConfigError(int line_, const std::string& what) : std::runtime_error(what), line(line_) {}
};

}  // namespace finform
