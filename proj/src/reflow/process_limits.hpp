#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "reflow/geometry.hpp"
#include "reflow/thermal_sim.hpp"

namespace reflow {

inline constexpr double kSolderMeltC = 217.0;

struct ProcessLimits {
  double slope_max = 3.0;            // °C/s, steepest allowed heating
  double slope_min = -3.0;           // °C/s, steepest allowed cooling
  Interval rise_150_190{60.0, 120.0};  // s
  Interval time_above_217{40.0, 90.0}; // s
  Interval peak{240.0, 250.0};         // °C

  /// Throws Error(Config) on inverted intervals or slope_min > slope_max.
  void validate() const;
};

struct TraceMetrics {
  double max_slope = 0.0;
  double min_slope = 0.0;
  std::optional<double> rise_time_150_190;
  double duration_above_217 = 0.0;
  double peak_temp = 0.0;
  double peak_time = 0.0;
};

/// Time at which the piecewise-linear trace first crosses `level` upward
/// among samples [0, end_index]. A trace already at or above the level at its
/// first sample crosses at that sample's time.
std::optional<double> first_upward_crossing(const ThermalTrace& trace, double level,
                                            std::size_t end_index);

/// Maximal time intervals on which the linear interpolant exceeds `level`.
std::vector<Interval> intervals_above(const ThermalTrace& trace, double level);

/// Slopes from forward differences, crossing times by linear interpolation.
/// Throws Error(Domain) for fewer than two samples.
TraceMetrics compute_metrics(const ThermalTrace& trace);

struct LimitRow {
  std::string name;
  std::optional<double> measured;  // absent metric fails its limit
  double lo = 0.0;
  double hi = 0.0;
  bool pass = false;
};

struct LimitVerdict {
  std::array<LimitRow, 5> rows;
  bool pass = false;
};

LimitVerdict check_limits(const TraceMetrics& metrics, const ProcessLimits& limits = {});

}  // namespace reflow
