#include "reflow/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

#include "reflow/ambient.hpp"
#include "reflow/error.hpp"
#include "reflow/parallel.hpp"

namespace reflow {

const char* to_string(AreaDomain domain) noexcept {
  return domain == AreaDomain::Position ? "position" : "time";
}

const char* to_string(Objective objective) noexcept {
  return objective == Objective::MinimumArea ? "minimum-area" : "most-symmetric";
}

double reflow_area(const ThermalTrace& trace, AreaDomain domain) {
  const auto& s = trace.samples;
  double area = 0.0;
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    const double a = s[i].temp_c - kSolderMeltC;
    const double b = s[i + 1].temp_c - kSolderMeltC;
    const double width = domain == AreaDomain::Position ? s[i + 1].x_cm - s[i].x_cm : s[i + 1].t_s - s[i].t_s;
    if (a >= 0.0 && b >= 0.0) {
      area += 0.5 * width * (a + b);
    } else if (a > 0.0) {
      area += 0.5 * width * a * (a / (a - b));
    } else if (b > 0.0) {
      area += 0.5 * width * b * (b / (b - a));
    }
  }
  return area;
}

double symmetry_score(const ThermalTrace& trace, double offset_step_s) {
  if (!(offset_step_s > 0.0)) fail(ErrorKind::Domain, "symmetry offset step must be positive");
  const auto intervals = intervals_above(trace, kSolderMeltC);
  if (intervals.empty()) fail(ErrorKind::Undefined, "trace never exceeds 217 C");
  if (intervals.size() > 1) fail(ErrorKind::Undefined, "trace exceeds 217 C on disjoint intervals");
  const double t1 = intervals.front().lo;
  const double t2 = intervals.front().hi;
  const double center = 0.5 * (t1 + t2);
  constexpr double kSlack = 1e-9;
  double score = 0.0;
  for (std::size_t k = 1;; ++k) {
    const double d = static_cast<double>(k) * offset_step_s;
    if (center - d < t1 - kSlack || center + d > t2 + kSlack) break;
    const double left = temperature_at(trace, std::max(center - d, t1));
    const double right = temperature_at(trace, std::min(center + d, t2));
    score += (left - right) * (left - right);
  }
  return score;
}

std::vector<double> inclusive_grid(Interval range, double step) {
  if (!(step > 0.0)) fail(ErrorKind::Domain, "grid step must be positive");
  if (!(range.lo <= range.hi)) fail(ErrorKind::Domain, "grid range is inverted");
  const double span = (range.hi - range.lo) / step;
  const double nearest = std::round(span);
  const bool exact = std::abs(span - nearest) <= 1e-9 * std::max(1.0, span);
  const auto count = static_cast<std::size_t>(exact ? nearest : std::floor(span));
  std::vector<double> grid;
  grid.reserve(count + 1);
  for (std::size_t i = 0; i <= count; ++i) {
    grid.push_back(std::round((range.lo + static_cast<double>(i) * step) * 1e9) / 1e9);
  }
  if (exact) grid.back() = range.hi;
  return grid;
}

namespace {

ProcessParameters with_speed(ProcessParameters params, double speed) {
  params.belt_speed = speed;
  return params;
}

std::vector<std::size_t> resolve_order(const SweepOptions& options, std::size_t count) {
  if (options.order.empty()) {
    std::vector<std::size_t> order(count);
    std::iota(order.begin(), order.end(), std::size_t{0});
    return order;
  }
  auto sorted = options.order;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < count; ++i) {
    if (sorted.size() != count || sorted[i] != i) fail(ErrorKind::Domain, "evaluation order is not a permutation of the grid");
  }
  return options.order;
}

std::optional<double> try_symmetry(const ThermalTrace& trace) {
  try {
    return symmetry_score(trace);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Undefined) throw;
  }
  return std::nullopt;
}

auto param_key(const ProcessParameters& p) { return std::tie(p.tt1, p.tt2, p.tt3, p.tt4, p.belt_speed); }

}  // namespace

SpeedSweepResult feasible_speed_interval(const OvenLayout& layout, const ProcessParameters& setpoints,
                                         const ModelSettings& model, Interval speed_range, double step,
                                         const SweepOptions& options) {
  const auto speeds = inclusive_grid(speed_range, step);
  const auto profile = build_profile(layout, setpoints, model.blend_weight);
  const auto order = resolve_order(options, speeds.size());
  SpeedSweepResult result;
  result.verdicts.resize(speeds.size());
  detail::parallel_for(speeds.size(), options.workers, [&](std::size_t k) {
    const std::size_t i = order[k];
    const auto trace = simulate(profile, with_speed(setpoints, speeds[i]), WeldingModel{model.q}, model.grid);
    const auto metrics = compute_metrics(trace);
    result.verdicts[i] = {speeds[i], check_limits(metrics, model.limits).pass, metrics,
                          reflow_area(trace, model.area_domain), try_symmetry(trace)};
  });
  for (const auto& v : result.verdicts) {
    if (v.pass) result.feasible_speeds.push_back(v.speed);
  }
  if (!result.feasible_speeds.empty()) result.max_feasible = result.feasible_speeds.back();
  return result;
}

ProcessParameters GridSpec::at(std::size_t index) const {
  ProcessParameters p;
  p.tt5 = tt5;
  p.belt_speed = speed[index % speed.size()];
  index /= speed.size();
  p.tt4 = tt4[index % tt4.size()];
  index /= tt4.size();
  p.tt3 = tt3[index % tt3.size()];
  index /= tt3.size();
  p.tt2 = tt2[index % tt2.size()];
  index /= tt2.size();
  p.tt1 = tt1[index];
  return p;
}

GridSpec make_grid(const ParameterRanges& ranges) {
  ranges.validate();
  GridSpec g;
  g.tt1 = inclusive_grid(ranges.tt1, ranges.temp_step);
  g.tt2 = inclusive_grid(ranges.tt2, ranges.temp_step);
  g.tt3 = inclusive_grid(ranges.tt3, ranges.temp_step);
  g.tt4 = inclusive_grid(ranges.tt4, ranges.temp_step);
  g.speed = inclusive_grid(ranges.belt_speed, ranges.speed_step);
  g.tt5 = ranges.tt5.lo;
  return g;
}

bool better(const SweepCandidate& a, const SweepCandidate& b, Objective objective) {
  if (objective == Objective::MostSymmetric) {
    const double sa = a.symmetry.value_or(0.0);
    const double sb = b.symmetry.value_or(0.0);
    if (sa != sb) return sa < sb;
  }
  if (a.area != b.area) return a.area < b.area;
  return param_key(a.params) < param_key(b.params);
}

SweepCandidate evaluate_candidate(const OvenLayout& layout, const ProcessParameters& params,
                                  const ModelSettings& model) {
  const auto profile = build_profile(layout, params, model.blend_weight);
  const auto trace = simulate(profile, params, WeldingModel{model.q}, model.grid);
  SweepCandidate c;
  c.params = params;
  c.metrics = compute_metrics(trace);
  c.feasible = check_limits(c.metrics, model.limits).pass;
  c.area = reflow_area(trace, model.area_domain);
  c.symmetry = try_symmetry(trace);
  return c;
}

namespace {

bool eligible(const SweepCandidate& c, Objective objective) {
  return c.feasible && (objective == Objective::MinimumArea || c.symmetry.has_value());
}

void sweep_into(OptimizationResult& result, const OvenLayout& layout, const GridSpec& grid,
                const ModelSettings& model, const SweepOptions& options) {
  const std::size_t count = grid.size();
  const auto order = resolve_order(options, count);
  std::vector<SweepCandidate> batch(count);
  detail::parallel_for(count, options.workers, [&](std::size_t k) {
    const std::size_t i = order[k];
    batch[i] = evaluate_candidate(layout, grid.at(i), model);
  });
  for (auto& c : batch) {
    if (c.feasible && !c.symmetry) ++result.symmetry_rejected;
    if (eligible(c, result.objective) && (!result.best || better(c, *result.best, result.objective))) {
      result.best = c;
    }
    result.candidates.push_back(std::move(c));
  }
  result.candidates_evaluated += count;
}

Interval around(double center, double half_width, Interval limits) {
  return {std::max(limits.lo, center - half_width), std::min(limits.hi, center + half_width)};
}

OptimizationResult joint_sweep(const OvenLayout& layout, const ParameterRanges& ranges,
                               const ModelSettings& model, Objective objective, bool refine,
                               const SweepOptions& options) {
  auto result = optimize(layout, make_grid(ranges), model, objective, options);
  if (!refine || !result.best) return result;
  const auto& b = result.best->params;
  GridSpec fine;
  const double t_step = ranges.temp_step / 5.0;
  fine.tt1 = inclusive_grid(around(b.tt1, ranges.temp_step, ranges.tt1), t_step);
  fine.tt2 = inclusive_grid(around(b.tt2, ranges.temp_step, ranges.tt2), t_step);
  fine.tt3 = inclusive_grid(around(b.tt3, ranges.temp_step, ranges.tt3), t_step);
  fine.tt4 = inclusive_grid(around(b.tt4, ranges.temp_step, ranges.tt4), t_step);
  fine.speed = inclusive_grid(around(b.belt_speed, ranges.speed_step, ranges.belt_speed), ranges.speed_step / 5.0);
  fine.tt5 = result.grid.tt5;
  SweepOptions fine_options{options.workers, {}};
  sweep_into(result, layout, fine, model, fine_options);
  result.refined = true;
  return result;
}

}  // namespace

OptimizationResult optimize(const OvenLayout& layout, const GridSpec& grid, const ModelSettings& model,
                            Objective objective, const SweepOptions& options) {
  OptimizationResult result;
  result.objective = objective;
  result.grid = grid;
  if (grid.size() == 0) return result;
  sweep_into(result, layout, grid, model, options);
  return result;
}

OptimizationResult minimize_area(const OvenLayout& layout, const ParameterRanges& ranges,
                                 const ModelSettings& model, bool refine, const SweepOptions& options) {
  return joint_sweep(layout, ranges, model, Objective::MinimumArea, refine, options);
}

OptimizationResult most_symmetric(const OvenLayout& layout, const ParameterRanges& ranges,
                                  const ModelSettings& model, bool refine, const SweepOptions& options) {
  return joint_sweep(layout, ranges, model, Objective::MostSymmetric, refine, options);
}

}  // namespace reflow
