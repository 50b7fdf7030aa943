// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "oracles.hpp"
#include "reflow/ambient.hpp"
#include "reflow/calibration.hpp"
#include "reflow/optimizer.hpp"
#include "reflow/process_limits.hpp"
#include "reflow/thermal_sim.hpp"
#include "traces.hpp"

using namespace reflow;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, format, a, b);
  return buf;
}

// ---- 1 -------------------------------------------------------------------

Outcome geometry_exactness() {
  Outcome o;
  const auto layout = default_layout();
  const auto& z = layout.zones();
  o.require(z.size() == 23, "expected 23 regions");
  // Entry 25, eleven 30.5 cm zones separated by ten 5 cm gaps, exit 25.
  std::vector<double> bounds{0.0, 25.0};
  for (int i = 0; i < 11; ++i) {
    bounds.push_back(bounds.back() + 30.5);
    if (i < 10) bounds.push_back(bounds.back() + 5.0);
  }
  bounds.push_back(bounds.back() + 25.0);
  o.require(bounds.back() == 435.5, "reference bounds do not sum to 435.5");
  for (std::size_t i = 0; i < z.size() && i + 1 < bounds.size(); ++i) {
    o.require(z[i].start_cm == bounds[i] && z[i].end_cm == bounds[i + 1], "boundary mismatch in " + z[i].name);
  }
  double covered = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    covered += z[i].end_cm - z[i].start_cm;
    if (i > 0) o.require(z[i].start_cm == z[i - 1].end_cm, "regions are not adjacent");
  }
  o.require(covered == 435.5 && layout.total_length_cm() == 435.5, "partition does not cover the furnace");
  o.require(z[0].kind == ZoneKind::Entry && z.back().kind == ZoneKind::Exit, "entry/exit misplaced");
  if (o.pass) o.detail = "23 regions partition [0, 435.5] cm exactly";
  return o;
}

// ---- 2 -------------------------------------------------------------------

Outcome field_correctness() {
  Outcome o;
  const auto profile = build_profile(default_layout(), ProcessParameters{}, 0.8);
  struct Probe {
    double x, expected;
  };
  const Probe probes[] = {
      {10.0, 25.0},   {100.0, 175.0},  {220.0, 195.0},   {250.0, 235.0},  {300.0, 255.0},
      {430.0, 25.0},  {200.0, 185.0},  {235.5, 215.0},   {271.0, 245.0},  {339.5, 255.0},
      {410.5, 25.0},  {375.0, 127.968719422671313},
  };
  for (const auto& p : probes) {
    const double got = ambient_at(profile, p.x);
    o.require(std::abs(got - p.expected) <= 1e-9, fmt("x=%.1f off by %.3g", p.x, got - p.expected));
  }
  const double scalar = oracle::reference_field(375.0, 175, 195, 235, 255, 25, 0.8);
  o.require(std::abs(ambient_at(profile, 375.0) - scalar) <= 1e-9, "blend interior disagrees with scalar oracle");
  if (o.pass) o.detail = "12 probes within 1e-9";
  return o;
}

// ---- 3 -------------------------------------------------------------------

double closed_form_error(double dt, double q) {
  const AmbientProfile flat({AmbientSegment{0.0, 300.0, ConstantForm{175.0}}});
  ProcessParameters params;
  params.belt_speed = 60.0;  // 300 cm in 300 s
  const auto trace = simulate(flat, params, {q}, {dt, dt});
  double worst = 0.0;
  for (const auto& s : trace.samples) worst = std::max(worst, std::abs(s.temp_c - oracle::relaxation(175.0, 25.0, q, s.t_s)));
  return worst;
}

Outcome ode_correctness() {
  Outcome o;
  const double err = closed_form_error(0.1, 0.021);
  o.require(err <= 1e-6, fmt("max error %.3g at dt=0.1", err));
  // Rounding swamps the truncation error at q = 0.021, so the order is measured
  // at a rate where dt = 0.4 and 0.2 are in the asymptotic regime.
  const double ratio = closed_form_error(0.4, 0.2) / closed_form_error(0.2, 0.2);
  o.require(ratio >= 12.0 && ratio <= 20.0, fmt("halving ratio %.3f", ratio));
  o.detail = o.pass ? fmt("max error %.2e, halving ratio %.2f", err, ratio) : o.detail;
  return o;
}

// ---- 4 / 10 --------------------------------------------------------------

struct DefaultRun {
  ThermalTrace rk4;
  ThermalTrace euler;
};

const DefaultRun& default_run() {
  static const DefaultRun run = [] {
    const ProcessParameters params;
    const auto profile = build_profile(default_layout(), params, 0.8);
    return DefaultRun{simulate(profile, params, {0.021}, {}), euler_reference(profile, params, {0.021}, 0.001)};
  }();
  return run;
}

// Measured at 0.0388 °C when frozen; the bound leaves room for platform rounding only.
constexpr double kEulerBound = 0.05;

Outcome oracle_equivalence() {
  Outcome o;
  const auto& run = default_run();
  double worst = 0.0;
  for (const auto& s : run.rk4.samples) worst = std::max(worst, std::abs(s.temp_c - temperature_at(run.euler, s.t_s)));
  o.require(worst <= kEulerBound, fmt("max |RK4 - Euler| = %.4f", worst));
  o.require(worst <= 0.5, "exceeds 0.5 C");
  if (o.pass) o.detail = fmt("max |RK4 - Euler| = %.4f C (bound %.2f)", worst, kEulerBound);
  return o;
}

Outcome default_sanity() {
  Outcome o;
  const auto& run = default_run();
  const auto& s = run.rk4.samples;
  o.require(std::all_of(s.begin(), s.end(), [](const auto& p) { return std::isfinite(p.temp_c); }), "non-finite value");
  o.require(s.front().temp_c == 25.0, "does not start at 25 C");
  auto peak_of = [](const ThermalTrace& t) {
    return *std::max_element(t.samples.begin(), t.samples.end(),
                             [](const auto& a, const auto& b) { return a.temp_c < b.temp_c; });
  };
  const auto peak = peak_of(run.rk4);
  const auto euler_peak = peak_of(run.euler);
  o.require(peak.x_cm >= 273.5 && peak.x_cm <= 410.5, fmt("peak at %.1f cm", peak.x_cm));
  o.require(euler_peak.x_cm >= 273.5 && euler_peak.x_cm <= 410.5, fmt("Euler peak at %.1f cm", euler_peak.x_cm));
  o.require(std::abs(peak.temp_c - euler_peak.temp_c) <= kEulerBound, "peak disagrees with Euler");
  o.require(s.back().temp_c < peak.temp_c && run.rk4.exit_sample && run.rk4.exit_sample->temp_c < peak.temp_c,
            "does not end below its peak");
  o.require(run.euler.samples.back().temp_c < euler_peak.temp_c, "Euler does not end below its peak");
  if (o.pass) o.detail = fmt("peak %.4f C at %.2f cm", peak.temp_c, peak.x_cm);
  return o;
}

// ---- 5 -------------------------------------------------------------------

Outcome calibration_round_trip() {
  Outcome o;
  const std::vector<double> grid{0.0200, 0.0205, 0.0210, 0.0215, 0.0220};
  const ProcessParameters params;
  const auto profile = build_profile(default_layout(), params, 0.8);
  CalibrationOptions options;
  options.refine_rounds = 0;
  options.workers = 0;
  std::mt19937_64 rng(20241016);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (const double q : grid) {
    auto measured = simulate(profile, params, {q}, {});
    const auto clean = calibrate_q(measured, default_layout(), params, 0.8, grid, options);
    o.require(clean.best_q == q, fmt("noise-free q*=%.4f recovered %.4f", q, clean.best_q));
    for (auto& s : measured.samples) s.temp_c += noise(rng);
    const auto noisy = calibrate_q(measured, default_layout(), params, 0.8, grid, options);
    o.require(noisy.best_q == q, fmt("noisy q*=%.4f recovered %.4f", q, noisy.best_q));
  }
  if (o.pass) o.detail = "5/5 noise-free, 5/5 with sigma = 1 C";
  return o;
}

// ---- 6 -------------------------------------------------------------------

struct Synthetic {
  const char* name;
  std::vector<std::pair<double, double>> knots;
  bool expect_pass;
  int failing_limit;  // -1 when every limit passes
};

Outcome limit_checker() {
  Outcome o;
  // Base: slopes within +/-2.1, rise 90 s, 55 s above 217, peak 245.
  const std::vector<Synthetic> cases = {
      {"slope+ ok", {{0, 25}, {43, 150}, {150, 190}, {170, 217}, {190, 245}, {225, 217}, {300, 100}}, true, -1},
      {"slope+ bad", {{0, 25}, {10, 70}, {60, 150}, {150, 190}, {170, 217}, {190, 245}, {225, 217}, {300, 100}}, false, 0},
      {"slope- ok", {{0, 25}, {60, 150}, {150, 190}, {170, 217}, {190, 245}, {225, 217}, {250, 145}}, true, -1},
      {"slope- bad", {{0, 25}, {60, 150}, {150, 190}, {170, 217}, {190, 245}, {225, 217}, {240, 160}}, false, 1},
      {"rise ok", {{0, 25}, {60, 150}, {175, 190}, {195, 217}, {215, 245}, {250, 217}, {320, 100}}, true, -1},
      {"rise bad", {{0, 25}, {60, 150}, {100, 190}, {170, 217}, {190, 245}, {225, 217}, {300, 100}}, false, 2},
      {"above ok", {{0, 25}, {60, 150}, {150, 190}, {170, 217}, {190, 245}, {250, 217}, {300, 100}}, true, -1},
      {"above bad", {{0, 25}, {60, 150}, {150, 190}, {170, 217}, {190, 245}, {260, 240}, {280, 217}, {340, 100}}, false, 3},
      {"peak ok", {{0, 25}, {60, 150}, {150, 190}, {170, 217}, {185, 249}, {215, 217}, {300, 100}}, true, -1},
      {"peak bad", {{0, 25}, {60, 150}, {150, 190}, {170, 217}, {185, 255}, {215, 217}, {300, 100}}, false, 4},
  };
  int agree = 0;
  for (const auto& c : cases) {
    const auto f = testing_support::polyline(c.knots);
    const auto trace = testing_support::sample_function(f, c.knots.back().first, 0.5);
    const auto verdict = check_limits(compute_metrics(trace));
    const auto ref = oracle::limits(oracle::metrics(trace.temperatures(), 0.5));
    const bool ref_rows[5] = {ref.slope_up, ref.slope_down, ref.rise, ref.above, ref.peak};
    bool same = verdict.pass == ref.all();
    for (int i = 0; i < 5; ++i) {
      same = same && verdict.rows[static_cast<std::size_t>(i)].pass == ref_rows[i];
      // The construction itself: only the targeted limit fails.
      o.require(ref_rows[i] == (i != c.failing_limit), std::string("case '") + c.name + "' is not isolating");
    }
    o.require(ref.all() == c.expect_pass, std::string("case '") + c.name + "' has the wrong expectation");
    agree += same;
  }
  o.require(agree == 10, fmt("%.0f/10 verdicts agree", agree));
  if (o.pass) o.detail = "10/10 verdicts agree";
  return o;
}

// ---- 7 -------------------------------------------------------------------

Outcome metrics_analytics() {
  Outcome o;
  // Triangle wave 197 <-> 245 with 40 s period, three teeth, knots on the sample grid.
  std::vector<std::pair<double, double>> knots;
  for (int k = 0; k <= 6; ++k) knots.push_back({20.0 * k, k % 2 == 0 ? 197.0 : 245.0});
  const auto f = testing_support::polyline(knots);
  for (const double speed : {60.0, 84.0}) {
    const auto trace = testing_support::sample_function(f, 120.0, 0.5, speed);
    // Each tooth: 48 C rise over 20 s, above 217 for 2 * 20 * 28 / 48 s, area 1/2 * base * 28.
    const double tooth_time = 2.0 * 20.0 * 28.0 / 48.0;
    const double exact_time = 3.0 * tooth_time;
    const double exact_area_t = 3.0 * 0.5 * tooth_time * 28.0;
    const double exact_area_x = exact_area_t * speed / 60.0;
    const double dur = compute_metrics(trace).duration_above_217;
    const double area_x = reflow_area(trace, AreaDomain::Position);
    const double area_t = reflow_area(trace, AreaDomain::Time);
    auto rel = [](double a, double b) { return std::abs(a - b) / std::abs(b); };
    o.require(rel(dur, exact_time) <= 1e-9, fmt("duration %.12g vs %.12g", dur, exact_time));
    o.require(rel(area_x, exact_area_x) <= 1e-9, fmt("area %.12g vs %.12g", area_x, exact_area_x));
    o.require(rel(area_t, exact_area_t) <= 1e-9, fmt("time area %.12g vs %.12g", area_t, exact_area_t));
    const double brute_time = oracle::brute_measure_above(f, 0.0, 120.0, 217.0, 0.001);
    const double brute_area = oracle::brute_area_above(f, 0.0, 120.0, 217.0, 0.001) * speed / 60.0;
    o.require(rel(dur, brute_time) <= 1e-4, fmt("duration vs brute force %.3g", rel(dur, brute_time)));
    o.require(rel(area_x, brute_area) <= 1e-4, fmt("area vs brute force %.3g", rel(area_x, brute_area)));
  }
  if (o.pass) o.detail = "closed form to 1e-9, brute force to 1e-4";
  return o;
}

// ---- 8 -------------------------------------------------------------------

struct BruteRow {
  bool feasible = false;
  double area = 0.0;
  std::optional<double> symmetry;
};

// Every candidate scored with the test oracles; the ordering is written out here.
std::vector<BruteRow> brute_force(const GridSpec& grid) {
  std::vector<BruteRow> rows(grid.size());
  const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < rows.size(); i += workers) {
        const auto p = grid.at(i);
        const auto temps = simulate(build_profile(default_layout(), p, 0.8), p, {0.021}, {}).temperatures();
        rows[i].feasible = oracle::limits(oracle::metrics(temps, 0.5)).all();
        rows[i].area = oracle::area_above(temps, 0.5 * p.belt_speed / 60.0);
        rows[i].symmetry = oracle::symmetry(temps, 0.5);
      }
    });
  }
  pool.clear();
  return rows;
}

std::optional<std::size_t> brute_best(const GridSpec& grid, const std::vector<BruteRow>& rows, bool symmetric) {
  std::optional<std::size_t> best;
  auto key = [&](std::size_t i) {
    const auto p = grid.at(i);
    const double first = symmetric ? *rows[i].symmetry : rows[i].area;
    const double second = symmetric ? rows[i].area : 0.0;
    return std::make_tuple(first, second, p.tt1, p.tt2, p.tt3, p.tt4, p.belt_speed);
  };
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].feasible || (symmetric && !rows[i].symmetry)) continue;
    if (!best || key(i) < key(*best)) best = i;
  }
  return best;
}

SweepOptions shuffled(std::size_t n, unsigned seed) {
  SweepOptions options;
  options.order.resize(n);
  std::iota(options.order.begin(), options.order.end(), std::size_t{0});
  std::shuffle(options.order.begin(), options.order.end(), std::mt19937(seed));
  return options;
}

Outcome sweep_identity() {
  Outcome o;
  const ParameterRanges ranges;
  const ModelSettings model;

  // Speed sweep at the default setpoints and at a feasible setpoint.
  auto start = Clock::now();
  for (const ProcessParameters& setpoints :
       {ProcessParameters{}, ProcessParameters{165.0, 185.0, 225.0, 265.0, 25.0, 70.0}}) {
    const auto sweep = feasible_speed_interval(default_layout(), setpoints, model, ranges.belt_speed, ranges.speed_sweep_step);
    std::vector<double> expected;
    for (int k = 0; k <= 350; ++k) {
      ProcessParameters p = setpoints;
      p.belt_speed = std::round((65.0 + 0.1 * k) * 1e9) / 1e9;
      const auto temps = simulate(build_profile(default_layout(), p, 0.8), p, {0.021}, {}).temperatures();
      if (oracle::limits(oracle::metrics(temps, 0.5)).all()) expected.push_back(p.belt_speed);
    }
    o.require(sweep.feasible_speeds == expected, "speed sweep differs from brute force");
    const auto again = feasible_speed_interval(default_layout(), setpoints, model, ranges.belt_speed,
                                               ranges.speed_sweep_step, shuffled(351, 5));
    o.require(again.feasible_speeds == sweep.feasible_speeds, "speed sweep depends on order");
  }
  const double speed_time = seconds_since(start);
  o.require(speed_time < 30.0, fmt("speed sweeps took %.1f s", speed_time));

  start = Clock::now();
  const auto area = minimize_area(default_layout(), ranges, model);
  const auto sym = most_symmetric(default_layout(), ranges, model);
  const auto area_shuffled = minimize_area(default_layout(), ranges, model, false, shuffled(area.grid.size(), 17));
  const auto sym_shuffled = most_symmetric(default_layout(), ranges, model, false, shuffled(sym.grid.size(), 23));
  const double joint_time = seconds_since(start);
  o.require(joint_time < 600.0, fmt("joint sweeps took %.1f s", joint_time));

  const auto rows = brute_force(area.grid);
  const auto best_area = brute_best(area.grid, rows, false);
  const auto best_sym = brute_best(area.grid, rows, true);
  auto same = [&](const OptimizationResult& r, const std::optional<std::size_t>& b, bool symmetric) {
    if (!b || !r.best) return !b && !r.best;
    const auto p = area.grid.at(*b);
    const bool tuple = r.best->params == p;
    const double want = symmetric ? *rows[*b].symmetry : rows[*b].area;
    const double got = symmetric ? *r.best->symmetry : r.best->area;
    return tuple && std::abs(want - got) <= 1e-9 * std::max(1.0, std::abs(want));
  };
  o.require(same(area, best_area, false), "minimize_area differs from brute force");
  o.require(same(sym, best_sym, true), "most_symmetric differs from brute force");
  o.require(same(area_shuffled, best_area, false), "minimize_area depends on order");
  o.require(same(sym_shuffled, best_sym, true), "most_symmetric depends on order");
  std::size_t feasible = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    feasible += rows[i].feasible;
    o.require(rows[i].feasible == area.candidates[i].feasible, "feasibility differs from brute force");
  }
  if (o.pass) {
    const auto p = area.best->params;
    char buf[200];
    std::snprintf(buf, sizeof buf, "%zu/%zu feasible; area best (%g,%g,%g,%g,%g); speed %.1f s, joint %.1f s", feasible,
                  rows.size(), p.tt1, p.tt2, p.tt3, p.tt4, p.belt_speed, speed_time, joint_time);
    o.detail = buf;
  }
  return o;
}

// ---- 9 -------------------------------------------------------------------

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome cli_determinism() {
  Outcome o;
  const auto dir = fs::temp_directory_path() / ("reflow_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::string small =
      "--ranges.tt1 165,170 --ranges.tt2 185,190 --ranges.tt3 225,230 --ranges.tt4 260,265 --ranges.belt_speed 80,86 ";
  const std::string feasible = "--params.tt1 165 --params.tt2 185 --params.tt3 225 --params.tt4 265 ";
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"field", "field --io.field_csv out.csv"},
      {"simulate", "simulate --io.trace_csv out.csv --io.verdict_csv out2.csv"},
      {"check", "check measured.csv --io.verdict_csv out.csv"},
      {"calibrate", "calibrate measured.csv --io.calibration_csv out.csv --calibration.fit_p true"},
      {"optimize-speed", feasible + "optimize-speed --io.candidates_csv out.csv"},
      {"optimize-area", small + "optimize-area --io.candidates_csv out.csv"},
      {"optimize-symmetry", small + "optimize-symmetry --io.candidates_csv out.csv"},
      {"config", "config"},
  };
  auto run = [&](const std::string& args) {
    const std::string cmd = "cd '" + dir.string() + "' && '" REFLOWCTL "' " + args + " > stdout.txt 2> stderr.txt";
    const int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  o.require(run("simulate --io.trace_csv measured.csv") == 0, "could not produce the input trace");
  for (const auto& [name, args] : commands) {
    std::vector<std::string> outputs[2];
    for (auto& out : outputs) {
      for (const char* f : {"out.csv", "out2.csv"}) fs::remove(dir / f);
      o.require(run(args) == 0, name + " failed: " + slurp(dir / "stderr.txt"));
      for (const char* f : {"stdout.txt", "stderr.txt", "out.csv", "out2.csv"}) out.push_back(slurp(dir / f));
    }
    o.require(outputs[0] == outputs[1], name + " output differs between runs");
  }
  fs::remove_all(dir);
  if (o.pass) o.detail = "8 commands byte-identical";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* label;
    std::function<Outcome()> check;
    double budget_s;  // wall-clock limit, 0 for none
  };
  const Criterion criteria[] = {
      {"AC1 geometry exactness", geometry_exactness, 1.0},
      {"AC2 ambient field probes", field_correctness, 0.0},
      {"AC3 RK4 vs closed form", ode_correctness, 1.0},
      {"AC4 RK4 vs Euler oracle", oracle_equivalence, 10.0},
      {"AC5 calibration round-trip", calibration_round_trip, 0.0},
      {"AC6 limit checker agreement", limit_checker, 0.0},
      {"AC7 above-217 analytics", metrics_analytics, 0.0},
      {"AC8 sweep/brute-force identity", sweep_identity, 0.0},
      {"AC9 CLI determinism", cli_determinism, 0.0},
      {"AC10 default-scenario sanity", default_sanity, 0.0},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = Clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double elapsed = seconds_since(start);
    if (c.budget_s > 0.0 && elapsed >= c.budget_s) o.require(false, fmt("took %.2f s (budget %.0f s)", elapsed, c.budget_s));
    std::printf("%-32s %s  [%.2f s] %s\n", c.label, o.pass ? "PASS" : "FAIL", elapsed, o.detail.c_str());
    std::fflush(stdout);
    failures += !o.pass;
  }
  std::printf("%d/10 criteria passed\n", 10 - failures);
  return failures == 0 ? 0 : 1;
}
