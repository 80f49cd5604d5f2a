#pragma once

#include <string>

#include "finform/analysis.hpp"
#include "finform/scenarios.hpp"

namespace finform {

/// Structured text report for one run; every number is printed with full
/// round-trip precision so reports compare exactly against in-memory values.
std::string format_run_report(const Scenario& sc, const SimResult& res, const DwellMetrics& dwell,
                              double oracle_sup_diff);

std::string format_pe_report(const PEReport& rep, const PEQuery& q);

}  // namespace finform
