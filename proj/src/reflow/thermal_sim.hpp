#pragma once

#include <optional>
#include <vector>

#include "reflow/ambient.hpp"
#include "reflow/geometry.hpp"

namespace reflow {

struct TraceSample {
  double t_s = 0.0;
  double x_cm = 0.0;
  double temp_c = 0.0;
  bool operator==(const TraceSample&) const = default;
};

/// Weld-center temperature sampled uniformly in time: samples[i].t_s == t0 + i * dt_s
/// and x = belt_speed / 60 * t. Simulated traces start at t0 = 0; measured ones
/// may start later.
struct ThermalTrace {
  double dt_s = 0.5;
  double belt_speed = 70.0;  // cm/min
  std::vector<TraceSample> samples;
  /// State at the furnace exit when it falls between grid samples (simulate only).
  std::optional<TraceSample> exit_sample;

  double duration_s() const { return samples.empty() ? 0.0 : samples.back().t_s - samples.front().t_s; }
  std::vector<double> temperatures() const;

  bool operator==(const ThermalTrace&) const = default;
};

/// Throws Error(Domain) if the trace is empty or violates the uniform-grid
/// invariants beyond `tolerance`.
void check_trace(const ThermalTrace& trace, double tolerance = 1e-9);

/// Linear interpolation at time t; snaps to a node within 1e-9 of a grid step.
/// Throws Error(Domain) outside the trace's time range.
double temperature_at(const ThermalTrace& trace, double t_s);

/// Lumped relaxation rate q = -k/c in 1/s; the board obeys dy/dt = q (T_amb - y).
struct WeldingModel {
  double q = 0.021;
};

struct SimulationGrid {
  double dt_s = 0.1;      // integration step
  double dt_out_s = 0.5;  // output interval, an integer multiple of dt_s

  /// Number of integration steps per output sample; throws Error(Config)
  /// when dt_out is not a positive integer multiple of dt.
  std::size_t stride() const;
};

/// Classical RK4 from the furnace entry (y = initial_c, tt5 by default) to the
/// exit. The last step is shortened to land on the exit, which is recorded in
/// exit_sample.
ThermalTrace simulate(const AmbientProfile& profile, const ProcessParameters& params,
                      const WeldingModel& model, const SimulationGrid& grid,
                      std::optional<double> initial_c = std::nullopt);

/// Forward Euler over the same ODE, one sample per step. Test oracle only.
ThermalTrace euler_reference(const AmbientProfile& profile, const ProcessParameters& params,
                             const WeldingModel& model, double dt_s,
                             std::optional<double> initial_c = std::nullopt);

/// Linear interpolation onto a uniform dt_out grid over the same time span.
ThermalTrace resample(const ThermalTrace& trace, double dt_out_s);

}  // namespace reflow
