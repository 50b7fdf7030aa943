#include "reflow/commands.hpp"

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <sstream>

#include "reflow/ambient.hpp"
#include "reflow/error.hpp"
#include "reflow/trace_io.hpp"

namespace reflow {

std::string format_fixed(double value, int min_decimals, int max_decimals) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  if (max_decimals < min_decimals) max_decimals = min_decimals;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", max_decimals, value);
  std::string s = buf;
  const auto dot = s.find('.');
  if (dot != std::string::npos) {
    std::size_t keep = dot + 1 + static_cast<std::size_t>(min_decimals);
    while (s.size() > keep && s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
  }
  if (s.starts_with('-') && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

namespace {

std::string fmt_temp(double v) { return format_fixed(v, 4); }
std::string fmt_pos(double v) { return format_fixed(v, 1, 6); }
std::string fmt_speed(double v) { return format_fixed(v, 1, 6); }

std::string measured_text(const LimitRow& row) { return row.measured ? fmt_temp(*row.measured) : ""; }

void check_parameters_for_run(const RunConfig& config) { config.validate(); }

}  // namespace

std::string verdict_csv(const LimitVerdict& verdict) {
  std::ostringstream out;
  out << "limit,measured,lo,hi,pass\n";
  for (const auto& row : verdict.rows) {
    out << row.name << ',' << measured_text(row) << ',' << fmt_temp(row.lo) << ',' << fmt_temp(row.hi) << ','
        << (row.pass ? "true" : "false") << '\n';
  }
  return out.str();
}

std::string verdict_text(const TraceMetrics& metrics, const LimitVerdict& verdict) {
  std::ostringstream out;
  out << "peak " << fmt_temp(metrics.peak_temp) << " C at t = " << format_fixed(metrics.peak_time, 1, 6) << " s\n";
  out << std::left << std::setw(16) << "limit" << std::setw(14) << "measured" << std::setw(12) << "lo"
      << std::setw(12) << "hi" << "result\n";
  for (const auto& row : verdict.rows) {
    out << std::setw(16) << row.name << std::setw(14) << (row.measured ? fmt_temp(*row.measured) : "absent")
        << std::setw(12) << fmt_temp(row.lo) << std::setw(12) << fmt_temp(row.hi) << (row.pass ? "pass" : "FAIL")
        << '\n';
  }
  out << "overall: " << (verdict.pass ? "pass" : "FAIL") << '\n';
  return out.str();
}

std::string field_csv(const RunConfig& config) {
  check_parameters_for_run(config);
  const auto profile = build_profile(config.layout(), config.params, config.p);
  const auto xs = inclusive_grid({0.0, profile.total_length_cm()}, config.field_dx);
  std::ostringstream out;
  out << "position_cm,temp_c\n";
  for (const double x : xs) out << fmt_pos(x) << ',' << fmt_temp(profile.at(x)) << '\n';
  return out.str();
}

SimulateOutput run_simulate(const RunConfig& config) {
  check_parameters_for_run(config);
  const auto profile = build_profile(config.layout(), config.params, config.p);
  SimulateOutput out;
  out.trace = simulate(profile, config.params, WeldingModel{config.q}, config.grid);
  const auto metrics = compute_metrics(out.trace);
  const auto verdict = check_limits(metrics, config.limits);
  out.trace_csv = trace_to_csv(out.trace);
  out.verdict_csv = verdict_csv(verdict);

  std::ostringstream rep;
  const auto& p = config.params;
  rep << "setpoints tt1..tt5: " << fmt_temp(p.tt1) << ", " << fmt_temp(p.tt2) << ", " << fmt_temp(p.tt3) << ", "
      << fmt_temp(p.tt4) << ", " << fmt_temp(p.tt5) << " C; belt speed " << fmt_speed(p.belt_speed) << " cm/min\n";
  rep << "model: q = " << format_fixed(config.q, 4, 8) << " 1/s, p = " << format_fixed(config.p, 1, 6)
      << "; RK4 dt = " << format_fixed(config.grid.dt_s, 1, 6) << " s, output every "
      << format_fixed(config.grid.dt_out_s, 1, 6) << " s\n";
  rep << "samples: " << out.trace.samples.size();
  if (out.trace.exit_sample) {
    rep << "; exit at t = " << format_fixed(out.trace.exit_sample->t_s, 4) << " s, "
        << fmt_temp(out.trace.exit_sample->temp_c) << " C";
  }
  rep << '\n' << verdict_text(metrics, verdict);
  out.report = rep.str();
  return out;
}

CheckOutput run_check(const RunConfig& config, const ThermalTrace& trace) {
  config.limits.validate();
  const auto metrics = compute_metrics(trace);
  const auto verdict = check_limits(metrics, config.limits);
  CheckOutput out;
  out.verdict_csv = verdict_csv(verdict);
  std::ostringstream rep;
  rep << "samples: " << trace.samples.size() << " at dt = " << format_fixed(trace.dt_s, 1, 6) << " s\n"
      << verdict_text(metrics, verdict);
  out.report = rep.str();
  return out;
}

CalibrateOutput run_calibrate(const RunConfig& config, const ThermalTrace& measured) {
  check_parameters_for_run(config);
  if (config.q_candidates.empty()) fail(ErrorKind::Config, "calibration.q_candidates is empty");
  const auto layout = config.layout();
  CalibrateOutput out;
  double p = config.p;
  if (config.fit_p) {
    out.blend = fit_blend_weight(measured, layout, config.params, config.q, config.p_candidates, config.grid);
    p = out.blend->best_weight;
  }
  CalibrationOptions options;
  options.grid = config.grid;
  options.refine_rounds = config.refine_rounds;
  options.workers = config.workers;
  out.result = calibrate_q(measured, layout, config.params, p, config.q_candidates, options);

  std::ostringstream table;
  table << "q,discrepancy,pearson\n";
  for (const auto& row : out.result.candidates) {
    table << format_fixed(row.q, 4, 8) << ',' << fmt_temp(row.discrepancy) << ',' << format_fixed(row.pearson, 5, 8)
          << '\n';
  }
  out.table_csv = table.str();

  std::ostringstream rep;
  rep << "measured: " << measured.samples.size() << " samples, dt = " << format_fixed(measured.dt_s, 1, 6)
      << " s, belt speed " << fmt_speed(measured.belt_speed) << " cm/min\n";
  rep << "discrepancy: mean squared error over measured time stamps (C^2); ties go to the smaller candidate\n";
  if (out.blend) {
    rep << "blend weight search at q = " << format_fixed(config.q, 4, 8) << ":\n";
    for (const auto& c : out.blend->candidates) {
      rep << "  p = " << format_fixed(c.weight, 1, 6) << "  discrepancy " << fmt_temp(c.discrepancy) << '\n';
    }
    rep << "best p: " << format_fixed(p, 1, 6) << '\n';
  }
  rep << "q grid (p = " << format_fixed(p, 1, 6) << "):\n" << std::left << std::setw(12) << "q" << std::setw(16)
      << "discrepancy" << "pearson\n";
  for (const auto& row : out.result.candidates) {
    rep << std::setw(12) << format_fixed(row.q, 4, 8) << std::setw(16) << fmt_temp(row.discrepancy)
        << format_fixed(row.pearson, 5, 8) << '\n';
  }
  if (!out.result.refined.empty()) {
    rep << "refinement: " << out.result.refined.size() << " extra candidates over " << config.refine_rounds
        << " round(s)\n";
  }
  rep << "best_q " << format_fixed(out.result.best_q, 4, 8) << " (discrepancy " << fmt_temp(out.result.best_discrepancy)
      << ")\n";
  out.report = rep.str();
  return out;
}

namespace {

std::string grid_line(const char* name, const std::vector<double>& values, const Interval& range, double step,
                      int decimals) {
  std::ostringstream out;
  out << "  " << name << ": [" << format_fixed(range.lo, decimals, 6) << ", " << format_fixed(range.hi, decimals, 6)
      << "] step " << format_fixed(step, 1, 6) << " -> " << values.size() << " values\n";
  return out.str();
}

std::string candidate_row(const ProcessParameters& p, bool feasible, double peak, double area,
                          std::optional<double> symmetry) {
  std::ostringstream out;
  out << format_fixed(p.tt1, 1, 6) << ',' << format_fixed(p.tt2, 1, 6) << ',' << format_fixed(p.tt3, 1, 6) << ','
      << format_fixed(p.tt4, 1, 6) << ',' << fmt_speed(p.belt_speed) << ',' << (feasible ? "true" : "false") << ','
      << fmt_temp(peak) << ',' << fmt_temp(area) << ',' << (symmetry ? fmt_temp(*symmetry) : "nan") << '\n';
  return out.str();
}

constexpr const char* kCandidateHeader = "tt1,tt2,tt3,tt4,v,feasible,peak,area,symmetry\n";

std::string speed_ranges(const std::vector<double>& feasible, double step) {
  if (feasible.empty()) return "none";
  std::string out;
  std::size_t start = 0;
  for (std::size_t i = 1; i <= feasible.size(); ++i) {
    if (i == feasible.size() || feasible[i] - feasible[i - 1] > 1.5 * step) {
      if (!out.empty()) out += ", ";
      out += "[" + fmt_speed(feasible[start]) + ", " + fmt_speed(feasible[i - 1]) + "]";
      start = i;
    }
  }
  return out;
}

}  // namespace

OptimizeOutput run_optimize(const RunConfig& config, OptimizeMode mode) {
  // Swept quantities come from the ranges, so only the fixed ones are range-checked.
  RunConfig checked = config;
  if (mode == OptimizeMode::Speed) {
    checked.params.belt_speed = config.ranges.belt_speed.lo;
  } else {
    checked.validate_ranges = false;
  }
  check_parameters_for_run(checked);
  const auto layout = config.layout();
  const auto model = config.model_settings();
  const auto& r = config.ranges;
  OptimizeOutput out;
  std::ostringstream rep;
  std::ostringstream csv;
  csv << kCandidateHeader;
  rep << "model: q = " << format_fixed(model.q, 4, 8) << " 1/s, p = " << format_fixed(model.blend_weight, 1, 6)
      << ", RK4 dt = " << format_fixed(model.grid.dt_s, 1, 6) << " s, metrics at dt_out = "
      << format_fixed(model.grid.dt_out_s, 1, 6) << " s\n";

  if (mode == OptimizeMode::Speed) {
    const auto sweep = feasible_speed_interval(layout, config.params, model, r.belt_speed, r.speed_sweep_step,
                                               SweepOptions{config.workers, {}});
    const auto& p = config.params;
    rep << "mode: speed (largest belt speed meeting every process limit)\n"
        << "setpoints tt1..tt5: " << fmt_temp(p.tt1) << ", " << fmt_temp(p.tt2) << ", " << fmt_temp(p.tt3) << ", "
        << fmt_temp(p.tt4) << ", " << fmt_temp(p.tt5) << " C\n"
        << "grid:\n"
        << grid_line("v", inclusive_grid(r.belt_speed, r.speed_sweep_step), r.belt_speed, r.speed_sweep_step, 1);
    rep << "feasible speeds: " << speed_ranges(sweep.feasible_speeds, r.speed_sweep_step) << '\n';
    rep << "max feasible speed: " << (sweep.max_feasible ? fmt_speed(*sweep.max_feasible) + " cm/min" : "none")
        << '\n';
    for (const auto& v : sweep.verdicts) {
      auto params = config.params;
      params.belt_speed = v.speed;
      csv << candidate_row(params, v.pass, v.metrics.peak_temp, v.area, v.symmetry);
    }
    out.report = rep.str();
    out.candidates_csv = csv.str();
    return out;
  }

  const Objective objective = mode == OptimizeMode::Area ? Objective::MinimumArea : Objective::MostSymmetric;
  const auto result = objective == Objective::MinimumArea
                          ? minimize_area(layout, r, model, config.refine, SweepOptions{config.workers, {}})
                          : most_symmetric(layout, r, model, config.refine, SweepOptions{config.workers, {}});
  const auto& g = result.grid;
  const char* area_unit = model.area_domain == AreaDomain::Position ? "C*cm" : "C*s";
  rep << "mode: " << (objective == Objective::MinimumArea ? "area" : "symmetry") << '\n';
  if (objective == Objective::MinimumArea) {
    rep << "objective: minimise reflow area = integral of (f - 217) where f > 217 over " << to_string(model.area_domain)
        << " (" << area_unit << ")\n";
  } else {
    rep << "objective: minimise symmetry score = sum over 0.5 s offsets of (f(n-d) - f(n+d))^2 around the centre n of "
           "the above-217 interval, then reflow area over "
        << to_string(model.area_domain) << " (" << area_unit << ")\n";
  }
  rep << "feasible only; ties broken by smallest (tt1, tt2, tt3, tt4, v)\n"
      << "grid (" << g.size() << " points):\n"
      << grid_line("tt1", g.tt1, r.tt1, r.temp_step, 1) << grid_line("tt2", g.tt2, r.tt2, r.temp_step, 1)
      << grid_line("tt3", g.tt3, r.tt3, r.temp_step, 1) << grid_line("tt4", g.tt4, r.tt4, r.temp_step, 1)
      << grid_line("v", g.speed, r.belt_speed, r.speed_step, 1) << "  tt5: " << fmt_temp(g.tt5) << '\n';
  if (result.refined) {
    rep << "refinement: steps / 5 within one coarse step of the incumbent; "
        << result.candidates_evaluated - g.size() << " extra points\n";
  }
  rep << "candidates evaluated: " << result.candidates_evaluated << '\n';
  std::size_t feasible = 0;
  for (const auto& c : result.candidates) feasible += c.feasible ? 1 : 0;
  rep << "feasible candidates: " << feasible << '\n';
  if (objective == Objective::MostSymmetric) {
    rep << "rejected (above-217 set not a single interval): " << result.symmetry_rejected << '\n';
  }
  if (result.best) {
    const auto& b = *result.best;
    rep << "best: tt1 " << format_fixed(b.params.tt1, 1, 6) << ", tt2 " << format_fixed(b.params.tt2, 1, 6) << ", tt3 "
        << format_fixed(b.params.tt3, 1, 6) << ", tt4 " << format_fixed(b.params.tt4, 1, 6) << ", v "
        << fmt_speed(b.params.belt_speed) << " cm/min\n"
        << "  area " << fmt_temp(b.area) << ' ' << area_unit << ", symmetry "
        << (b.symmetry ? fmt_temp(*b.symmetry) : std::string("nan")) << " C^2, peak " << fmt_temp(b.metrics.peak_temp)
        << " C\n";
  } else {
    rep << "best: none\n";
  }
  for (const auto& c : result.candidates) {
    csv << candidate_row(c.params, c.feasible, c.metrics.peak_temp, c.area, c.symmetry);
  }
  out.report = rep.str();
  out.candidates_csv = csv.str();
  return out;
}

}  // namespace reflow
