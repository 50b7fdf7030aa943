#include "reflow/thermal_sim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "reflow/error.hpp"

namespace reflow {

std::vector<double> ThermalTrace::temperatures() const {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.temp_c);
  return out;
}

void check_trace(const ThermalTrace& trace, double tolerance) {
  if (trace.samples.empty()) fail(ErrorKind::Domain, "trace is empty");
  if (!(trace.dt_s > 0.0)) fail(ErrorKind::Domain, "trace sample interval must be positive");
  if (!(trace.belt_speed > 0.0)) fail(ErrorKind::Domain, "trace belt_speed must be positive");
  const double v = trace.belt_speed / 60.0;
  const double t0 = trace.samples.front().t_s;
  if (!(t0 >= 0.0)) fail(ErrorKind::Domain, "trace must start at a non-negative time");
  for (std::size_t i = 0; i < trace.samples.size(); ++i) {
    const auto& s = trace.samples[i];
    const double t = t0 + static_cast<double>(i) * trace.dt_s;
    if (std::abs(s.t_s - t) > tolerance * std::max(1.0, t) ||
        std::abs(s.x_cm - v * s.t_s) > tolerance * std::max(1.0, s.x_cm)) {
      std::ostringstream msg;
      msg << "trace sample " << i << " is off the uniform grid";
      fail(ErrorKind::Domain, msg.str());
    }
  }
}

double temperature_at(const ThermalTrace& trace, double t_s) {
  const auto& s = trace.samples;
  if (s.empty()) fail(ErrorKind::Domain, "trace is empty");
  const double u = (t_s - s.front().t_s) / trace.dt_s;
  const double last = static_cast<double>(s.size() - 1);
  if (u < -1e-9 || u > last + 1e-9) {
    std::ostringstream msg;
    msg << "time " << t_s << " s lies outside the trace";
    fail(ErrorKind::Domain, msg.str());
  }
  const double nearest = std::round(u);
  if (std::abs(u - nearest) <= 1e-9) return s[static_cast<std::size_t>(nearest)].temp_c;
  const auto i = static_cast<std::size_t>(std::floor(u));
  const double w = u - static_cast<double>(i);
  return s[i].temp_c + w * (s[i + 1].temp_c - s[i].temp_c);
}

std::size_t SimulationGrid::stride() const {
  if (!(dt_s > 0.0)) fail(ErrorKind::Config, "integration step dt must be positive");
  if (!(dt_out_s > 0.0)) fail(ErrorKind::Config, "output interval dt_out must be positive");
  const double ratio = dt_out_s / dt_s;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * ratio) {
    fail(ErrorKind::Config, "dt_out must be a positive integer multiple of dt");
  }
  return static_cast<std::size_t>(rounded);
}

namespace {

struct Integration {
  const AmbientProfile& profile;
  double speed_cm_s;
  double length_cm;
  double q;

  double position(double t) const { return std::min(speed_cm_s * t, length_cm); }
  double rate(double t, double y) const { return q * (profile.at(position(t)) - y); }

  double rk4(double t, double y, double h) const {
    const double k1 = rate(t, y);
    const double k2 = rate(t + 0.5 * h, y + 0.5 * h * k1);
    const double k3 = rate(t + 0.5 * h, y + 0.5 * h * k2);
    const double k4 = rate(t + h, y + h * k3);
    return y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }

  double euler(double t, double y, double h) const { return y + h * rate(t, y); }
};

template <typename Step>
ThermalTrace integrate(const AmbientProfile& profile, const ProcessParameters& params, double q,
                       double dt, std::size_t stride, std::optional<double> initial_c, Step step) {
  if (!(params.belt_speed > 0.0)) fail(ErrorKind::Domain, "belt_speed must be positive");
  if (!(q > 0.0)) fail(ErrorKind::Domain, "welding coefficient q must be positive");
  const Integration ode{profile, params.speed_cm_per_s(), profile.total_length_cm(), q};
  const double t_end = ode.length_cm / ode.speed_cm_s;
  // Step counts within 1e-9 of an integer are snapped so no sliver step remains.
  const double steps_exact = t_end / dt;
  std::size_t full_steps = static_cast<std::size_t>(std::floor(steps_exact));
  if (steps_exact - std::floor(steps_exact) > 1.0 - 1e-9) ++full_steps;

  const double dt_out = dt * static_cast<double>(stride);
  ThermalTrace trace;
  trace.dt_s = dt_out;
  trace.belt_speed = params.belt_speed;
  trace.samples.reserve(full_steps / stride + 1);

  double y = initial_c.value_or(params.tt5);
  trace.samples.push_back({0.0, 0.0, y});
  for (std::size_t i = 0; i < full_steps; ++i) {
    y = step(ode, static_cast<double>(i) * dt, y, dt);
    if ((i + 1) % stride == 0) {
      const double t = static_cast<double>(trace.samples.size()) * dt_out;
      trace.samples.push_back({t, ode.position(t), y});
    }
  }
  const double t_last = static_cast<double>(full_steps) * dt;
  const double remainder = t_end - t_last;
  if (remainder > 1e-12) y = step(ode, t_last, y, remainder);
  trace.exit_sample = TraceSample{t_end, ode.length_cm, y};
  return trace;
}

}  // namespace

ThermalTrace simulate(const AmbientProfile& profile, const ProcessParameters& params,
                      const WeldingModel& model, const SimulationGrid& grid,
                      std::optional<double> initial_c) {
  const std::size_t stride = grid.stride();
  return integrate(profile, params, model.q, grid.dt_s, stride, initial_c,
                   [](const Integration& ode, double t, double y, double h) { return ode.rk4(t, y, h); });
}

ThermalTrace euler_reference(const AmbientProfile& profile, const ProcessParameters& params,
                             const WeldingModel& model, double dt_s, std::optional<double> initial_c) {
  if (!(dt_s > 0.0)) fail(ErrorKind::Domain, "Euler step must be positive");
  return integrate(profile, params, model.q, dt_s, 1, initial_c,
                   [](const Integration& ode, double t, double y, double h) { return ode.euler(t, y, h); });
}

ThermalTrace resample(const ThermalTrace& trace, double dt_out_s) {
  if (trace.samples.empty()) fail(ErrorKind::Domain, "cannot resample an empty trace");
  if (!(dt_out_s > 0.0)) fail(ErrorKind::Domain, "resample interval must be positive");
  const double t0 = trace.samples.front().t_s;
  const double span = trace.duration_s();
  const auto count = static_cast<std::size_t>(std::floor(span / dt_out_s + 1e-9)) + 1;
  ThermalTrace out;
  out.dt_s = dt_out_s;
  out.belt_speed = trace.belt_speed;
  out.samples.reserve(count);
  const double v = trace.belt_speed / 60.0;
  for (std::size_t j = 0; j < count; ++j) {
    const double t = t0 + static_cast<double>(j) * dt_out_s;
    out.samples.push_back({t, v * t, temperature_at(trace, std::min(t, t0 + span))});
  }
  return out;
}

}  // namespace reflow
