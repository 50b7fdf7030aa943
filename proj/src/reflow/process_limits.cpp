#include "reflow/process_limits.hpp"

#include <algorithm>
#include <limits>

#include "reflow/error.hpp"

namespace reflow {

void ProcessLimits::validate() const {
  if (!(slope_min <= slope_max)) fail(ErrorKind::Config, "limits: slope_min exceeds slope_max");
  for (const auto& [name, range] : {std::pair{"rise_150_190", rise_150_190},
                                    std::pair{"time_above_217", time_above_217},
                                    std::pair{"peak", peak}}) {
    if (!(range.lo <= range.hi)) fail(ErrorKind::Config, std::string("limits: inverted interval ") + name);
  }
}

std::optional<double> first_upward_crossing(const ThermalTrace& trace, double level,
                                            std::size_t end_index) {
  const auto& s = trace.samples;
  if (s.empty()) return std::nullopt;
  if (s.front().temp_c >= level) return s.front().t_s;
  end_index = std::min(end_index, s.size() - 1);
  for (std::size_t i = 0; i < end_index; ++i) {
    const double a = s[i].temp_c;
    const double b = s[i + 1].temp_c;
    if (a < level && b >= level) {
      return s[i].t_s + (level - a) / (b - a) * (s[i + 1].t_s - s[i].t_s);
    }
  }
  return std::nullopt;
}

std::vector<Interval> intervals_above(const ThermalTrace& trace, double level) {
  const auto& s = trace.samples;
  std::vector<Interval> out;
  if (s.empty()) return out;
  std::optional<double> open;
  if (s.front().temp_c > level) open = s.front().t_s;
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    const double a = s[i].temp_c;
    const double b = s[i + 1].temp_c;
    const double ta = s[i].t_s;
    const double tb = s[i + 1].t_s;
    if (!open && b > level && a <= level) {
      open = ta + (level - a) / (b - a) * (tb - ta);
    } else if (open && a > level && b <= level) {
      out.push_back({*open, ta + (a - level) / (a - b) * (tb - ta)});
      open.reset();
    }
  }
  if (open) out.push_back({*open, s.back().t_s});
  return out;
}

TraceMetrics compute_metrics(const ThermalTrace& trace) {
  const auto& s = trace.samples;
  if (s.size() < 2) fail(ErrorKind::Domain, "metrics need at least two samples");
  TraceMetrics m;
  m.max_slope = -std::numeric_limits<double>::infinity();
  m.min_slope = std::numeric_limits<double>::infinity();
  std::size_t peak_index = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i].temp_c > s[peak_index].temp_c) peak_index = i;
    if (i + 1 < s.size()) {
      const double slope = (s[i + 1].temp_c - s[i].temp_c) / trace.dt_s;
      m.max_slope = std::max(m.max_slope, slope);
      m.min_slope = std::min(m.min_slope, slope);
    }
  }
  m.peak_temp = s[peak_index].temp_c;
  m.peak_time = s[peak_index].t_s;

  const auto t150 = first_upward_crossing(trace, 150.0, peak_index);
  const auto t190 = first_upward_crossing(trace, 190.0, peak_index);
  if (t150 && t190) m.rise_time_150_190 = *t190 - *t150;

  for (const auto& iv : intervals_above(trace, kSolderMeltC)) m.duration_above_217 += iv.hi - iv.lo;
  return m;
}

LimitVerdict check_limits(const TraceMetrics& metrics, const ProcessLimits& limits) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  LimitVerdict v;
  v.rows[0] = {"max_slope", metrics.max_slope, -inf, limits.slope_max,
               metrics.max_slope <= limits.slope_max};
  v.rows[1] = {"min_slope", metrics.min_slope, limits.slope_min, inf,
               metrics.min_slope >= limits.slope_min};
  v.rows[2] = {"rise_150_190", metrics.rise_time_150_190, limits.rise_150_190.lo,
               limits.rise_150_190.hi,
               metrics.rise_time_150_190 && limits.rise_150_190.contains(*metrics.rise_time_150_190)};
  v.rows[3] = {"time_above_217", metrics.duration_above_217, limits.time_above_217.lo,
               limits.time_above_217.hi, limits.time_above_217.contains(metrics.duration_above_217)};
  v.rows[4] = {"peak", metrics.peak_temp, limits.peak.lo, limits.peak.hi,
               limits.peak.contains(metrics.peak_temp)};
  v.pass = std::all_of(v.rows.begin(), v.rows.end(), [](const LimitRow& r) { return r.pass; });
  return v;
}

}  // namespace reflow
