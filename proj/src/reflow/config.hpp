#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "reflow/geometry.hpp"
#include "reflow/optimizer.hpp"
#include "reflow/process_limits.hpp"
#include "reflow/thermal_sim.hpp"

namespace reflow {

struct IoPaths {
  std::string trace_csv;        // simulate: trace output
  std::string verdict_csv;      // simulate/check: verdict table output
  std::string field_csv;        // field: ambient field output
  std::string candidates_csv;   // optimize-*: full candidate table
  std::string calibration_csv;  // calibrate: per-candidate table
  std::string measured_csv;     // calibrate/check: input trace
};

/// Everything a command needs. Defaults reproduce the reference oven at
/// 175/195/235/255/25 °C and 70 cm/min with q = 0.021 1/s and p = 0.8.
struct RunConfig {
  std::optional<OvenLayout> layout_override;
  ProcessParameters params;
  bool validate_ranges = true;
  double q = 0.021;
  double p = 0.8;
  SimulationGrid grid;
  double field_dx = 0.1;
  ParameterRanges ranges;
  ProcessLimits limits;
  AreaDomain area_domain = AreaDomain::Position;
  bool refine = false;
  unsigned workers = 0;
  std::vector<double> q_candidates{0.0200, 0.0205, 0.0210, 0.0215, 0.0220};
  std::vector<double> p_candidates{0.6, 0.7, 0.8, 0.9, 1.0};
  int refine_rounds = 1;
  bool fit_p = false;
  IoPaths io;

  OvenLayout layout() const { return layout_override ? *layout_override : default_layout(); }
  ModelSettings model_settings() const;

  /// Throws Error(Config) naming the first offending key.
  void validate() const;
};

/// Scalar and list keys, addressed as "section.name".
struct ConfigKey {
  const char* name;
  const char* help;
};

std::span<const ConfigKey> config_keys();

/// Sets one key from its textual form (lists and intervals are comma
/// separated). Throws Error(Config) for unknown keys or unparsable values.
void set_config_value(RunConfig& config, std::string_view key, std::string_view value);
std::string get_config_value(const RunConfig& config, std::string_view key);

/// JSON document of nested sections, e.g. {"params": {"tt1": 180}}. Unknown
/// sections or keys are errors. An empty object yields the defaults.
RunConfig parse_config(std::string_view json_text, const std::string& source = "<config>");
RunConfig load_config(const std::filesystem::path& path);

/// Canonical JSON rendering of every key (and the layout override, if any).
std::string dump_config(const RunConfig& config);

}  // namespace reflow
