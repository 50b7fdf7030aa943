#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "reflow/thermal_sim.hpp"

namespace reflow {

/// Writes `t_s,x_cm,temp_c` with six fractional digits.
void write_trace_csv(const ThermalTrace& trace, std::ostream& out);
void write_trace_csv(const ThermalTrace& trace, const std::filesystem::path& path);
std::string trace_to_csv(const ThermalTrace& trace);

/// Accepts `t_s,temp_c` (positions rebuilt from `belt_speed`, required) or
/// `t_s,x_cm,temp_c` (belt speed inferred from the last row, `belt_speed` ignored).
/// Lines starting with '#' and blank lines are ignored. Throws Error(Parse)
/// naming the offending line on malformed rows, decreasing time or spacing
/// that deviates from uniform by more than 1e-6 s.
ThermalTrace parse_trace_csv(std::istream& in, std::optional<double> belt_speed,
                             const std::string& source = "<stream>");
ThermalTrace load_trace_csv(const std::filesystem::path& path, std::optional<double> belt_speed);

}  // namespace reflow
