#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "reflow/geometry.hpp"
#include "reflow/process_limits.hpp"
#include "reflow/thermal_sim.hpp"

namespace reflow {

enum class AreaDomain { Position, Time };

const char* to_string(AreaDomain domain) noexcept;

/// Area between the trace and the 217 °C line where the trace exceeds it,
/// integrated exactly over the piecewise-linear interpolant. Position domain
/// gives °C·cm, time domain °C·s.
double reflow_area(const ThermalTrace& trace, AreaDomain domain = AreaDomain::Position);

/// Sum of squared differences of mirrored values around the midpoint of the
/// single above-217 interval, at 0.5 s offsets. Throws Error(Undefined) when
/// the trace never exceeds 217 °C or does so on several disjoint intervals.
double symmetry_score(const ThermalTrace& trace, double offset_step_s = 0.5);

/// Inclusive grid lo, lo + step, ..., hi (the last point is hi exactly).
std::vector<double> inclusive_grid(Interval range, double step);

struct ModelSettings {
  double q = 0.021;
  double blend_weight = 0.8;
  SimulationGrid grid;
  ProcessLimits limits;
  AreaDomain area_domain = AreaDomain::Position;
};

struct SpeedVerdict {
  double speed = 0.0;
  bool pass = false;
  TraceMetrics metrics;
  double area = 0.0;
  std::optional<double> symmetry;
};

struct SpeedSweepResult {
  std::vector<double> feasible_speeds;  // ascending
  std::optional<double> max_feasible;
  std::vector<SpeedVerdict> verdicts;   // one per grid speed, ascending
};

struct SweepOptions {
  unsigned workers = 0;  // 0 = hardware concurrency
  /// Evaluation order over grid indices; empty means natural order. Results do
  /// not depend on it.
  std::vector<std::size_t> order;
};

/// Simulates every speed on the inclusive grid (step cm/min) with fixed
/// setpoints and collects those satisfying all process limits.
SpeedSweepResult feasible_speed_interval(const OvenLayout& layout, const ProcessParameters& setpoints,
                                         const ModelSettings& model, Interval speed_range, double step,
                                         const SweepOptions& options = {});

struct SweepCandidate {
  ProcessParameters params;
  TraceMetrics metrics;
  bool feasible = false;
  double area = 0.0;
  std::optional<double> symmetry;  // absent when the above-217 set is empty or disconnected
};

enum class Objective { MinimumArea, MostSymmetric };

const char* to_string(Objective objective) noexcept;

struct GridSpec {
  std::vector<double> tt1, tt2, tt3, tt4, speed;
  double tt5 = 25.0;

  std::size_t size() const { return tt1.size() * tt2.size() * tt3.size() * tt4.size() * speed.size(); }
  /// Index order: tt1 slowest, speed fastest (lexicographic parameter order).
  ProcessParameters at(std::size_t index) const;
};

GridSpec make_grid(const ParameterRanges& ranges);

struct OptimizationResult {
  Objective objective = Objective::MinimumArea;
  std::optional<SweepCandidate> best;
  std::size_t candidates_evaluated = 0;
  std::size_t symmetry_rejected = 0;  // feasible candidates with no single above-217 interval
  std::vector<SweepCandidate> candidates;  // grid order; refinement candidates appended
  GridSpec grid;
  bool refined = false;
};

/// Strict total order used for the reduction: objective tuple first, then the
/// parameter tuple (tt1, tt2, tt3, tt4, v) lexicographically.
bool better(const SweepCandidate& a, const SweepCandidate& b, Objective objective);

SweepCandidate evaluate_candidate(const OvenLayout& layout, const ProcessParameters& params,
                                  const ModelSettings& model);

/// Exhaustive sweep over `grid`; the best feasible candidate under `objective`.
OptimizationResult optimize(const OvenLayout& layout, const GridSpec& grid, const ModelSettings& model,
                            Objective objective, const SweepOptions& options = {});

/// Joint sweep over the range grids. With `refine`, a second sweep at 5x finer
/// steps spans one coarse step either side of the incumbent (clipped to ranges).
OptimizationResult minimize_area(const OvenLayout& layout, const ParameterRanges& ranges,
                                 const ModelSettings& model, bool refine = false,
                                 const SweepOptions& options = {});
OptimizationResult most_symmetric(const OvenLayout& layout, const ParameterRanges& ranges,
                                  const ModelSettings& model, bool refine = false,
                                  const SweepOptions& options = {});

}  // namespace reflow
