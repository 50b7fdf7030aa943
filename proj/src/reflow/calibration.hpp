#pragma once

#include <span>
#include <vector>

#include "reflow/ambient.hpp"
#include "reflow/geometry.hpp"
#include "reflow/thermal_sim.hpp"

namespace reflow {

/// Measured samples paired with the simulated curve interpolated at the
/// measured time stamps.
struct AlignedPair {
  std::vector<double> times;
  std::vector<double> measured;
  std::vector<double> simulated;
};

/// Restricts to the overlapping time range; throws Error(Domain) when fewer
/// than two measured stamps fall inside it.
AlignedPair align(const ThermalTrace& measured, const ThermalTrace& simulated);

/// Mean squared error, °C².
double discrepancy(const AlignedPair& pair);

/// Sample Pearson correlation; throws Error(Undefined) on zero variance.
double pearson(std::span<const double> a, std::span<const double> b);
inline double pearson(const AlignedPair& pair) { return pearson(pair.measured, pair.simulated); }

struct CalibrationRow {
  double q = 0.0;
  double discrepancy = 0.0;
  double pearson = 0.0;
};

struct CalibrationResult {
  double best_q = 0.0;
  double best_discrepancy = 0.0;
  std::vector<CalibrationRow> candidates;  // the requested grid, in input order
  std::vector<CalibrationRow> refined;     // rows added by refinement rounds
};

struct CalibrationOptions {
  SimulationGrid grid;
  /// Each round re-grids +/- one step around the incumbent at a tenth of the step.
  int refine_rounds = 1;
  unsigned workers = 1;
};

/// Index of the smallest (score, key) pair; ties on score go to the smaller key.
std::size_t argmin_by_score(std::span<const double> scores, std::span<const double> keys);

CalibrationResult calibrate_q(const ThermalTrace& measured, const OvenLayout& layout,
                              const ProcessParameters& params, double blend_weight,
                              std::span<const double> q_candidates,
                              const CalibrationOptions& options = {});

}  // namespace reflow
