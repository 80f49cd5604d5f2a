#pragma once

#include <iosfwd>
#include <string>

#include "finform/sim.hpp"

namespace finform {

/// Delimiter-separated trace, `# finform-trace v1` header, one row per
/// recorded step; switching events interleaved as `# event` comment lines.
void write_trace_csv(std::ostream& os, const Trace& trace);
void write_trace_csv_file(const std::string& path, const Trace& trace);

Trace read_trace_csv(std::istream& is);
Trace read_trace_csv_file(const std::string& path);

}  // namespace finform
