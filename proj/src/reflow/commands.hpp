#pragma once

#include <string>

#include "reflow/calibration.hpp"
#include "reflow/config.hpp"
#include "reflow/optimizer.hpp"
#include "reflow/process_limits.hpp"
#include "reflow/thermal_sim.hpp"

namespace reflow {

/// Fixed-point text with at least `min_decimals` digits, extended up to
/// `max_decimals` when needed to represent the value.
std::string format_fixed(double value, int min_decimals, int max_decimals = -1);

std::string verdict_csv(const LimitVerdict& verdict);
std::string verdict_text(const TraceMetrics& metrics, const LimitVerdict& verdict);

/// `position_cm,temp_c` on the inclusive field.dx grid.
std::string field_csv(const RunConfig& config);

struct SimulateOutput {
  ThermalTrace trace;
  std::string trace_csv;
  std::string verdict_csv;
  std::string report;
};
SimulateOutput run_simulate(const RunConfig& config);

struct CheckOutput {
  std::string verdict_csv;
  std::string report;
};
CheckOutput run_check(const RunConfig& config, const ThermalTrace& trace);

struct CalibrateOutput {
  CalibrationResult result;
  std::optional<BlendFit> blend;
  std::string table_csv;  // q,discrepancy,pearson for the requested grid
  std::string report;
};
CalibrateOutput run_calibrate(const RunConfig& config, const ThermalTrace& measured);

enum class OptimizeMode { Speed, Area, Symmetry };

struct OptimizeOutput {
  std::string report;
  std::string candidates_csv;  // tt1,tt2,tt3,tt4,v,feasible,peak,area,symmetry
};
OptimizeOutput run_optimize(const RunConfig& config, OptimizeMode mode);

}  // namespace reflow
