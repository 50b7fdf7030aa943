#include "reflow/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "reflow/error.hpp"
#include "reflow/parallel.hpp"

namespace reflow {

AlignedPair align(const ThermalTrace& measured, const ThermalTrace& simulated) {
  if (measured.samples.empty() || simulated.samples.empty()) {
    fail(ErrorKind::Domain, "cannot align an empty trace");
  }
  const double lo = std::max(measured.samples.front().t_s, simulated.samples.front().t_s);
  const double hi = std::min(measured.samples.back().t_s, simulated.samples.back().t_s);
  AlignedPair pair;
  for (const auto& s : measured.samples) {
    if (s.t_s < lo - 1e-9 || s.t_s > hi + 1e-9) continue;
    pair.times.push_back(s.t_s);
    pair.measured.push_back(s.temp_c);
    pair.simulated.push_back(temperature_at(simulated, std::clamp(s.t_s, lo, hi)));
  }
  if (pair.times.size() < 2) {
    fail(ErrorKind::Domain, "measured and simulated traces have no overlapping time range");
  }
  return pair;
}

double discrepancy(const AlignedPair& pair) {
  double sum = 0.0;
  for (std::size_t i = 0; i < pair.measured.size(); ++i) {
    const double d = pair.measured[i] - pair.simulated[i];
    sum += d * d;
  }
  return sum / static_cast<double>(pair.measured.size());
}

double pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) {
    fail(ErrorKind::Domain, "pearson needs two equally long series of at least two values");
  }
  const auto n = static_cast<double>(a.size());
  double mean_a = 0.0;
  double mean_b = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    mean_a += a[i];
    mean_b += b[i];
  }
  mean_a /= n;
  mean_b /= n;
  double sab = 0.0;
  double saa = 0.0;
  double sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - mean_a;
    const double db = b[i] - mean_b;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) fail(ErrorKind::Undefined, "correlation undefined for a zero-variance series");
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

std::size_t argmin_by_score(std::span<const double> scores, std::span<const double> keys) {
  if (scores.empty() || scores.size() != keys.size()) fail(ErrorKind::Internal, "argmin over empty set");
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] < scores[best] || (scores[i] == scores[best] && keys[i] < keys[best])) best = i;
  }
  return best;
}

namespace {

std::vector<CalibrationRow> score_candidates(const ThermalTrace& measured, const AmbientProfile& profile,
                                             const ProcessParameters& params, std::span<const double> qs,
                                             const CalibrationOptions& options) {
  std::vector<CalibrationRow> rows(qs.size());
  detail::parallel_for(qs.size(), options.workers, [&](std::size_t i) {
    if (!(qs[i] > 0.0)) fail(ErrorKind::Domain, "q candidates must be positive");
    const auto sim = simulate(profile, params, WeldingModel{qs[i]}, options.grid);
    const auto pair = align(measured, sim);
    rows[i] = {qs[i], discrepancy(pair), pearson(pair)};
  });
  return rows;
}

}  // namespace

CalibrationResult calibrate_q(const ThermalTrace& measured, const OvenLayout& layout,
                              const ProcessParameters& params, double blend_weight,
                              std::span<const double> q_candidates, const CalibrationOptions& options) {
  if (q_candidates.empty()) fail(ErrorKind::Domain, "q candidate list is empty");
  check_trace(measured, 1e-6);
  {
    const auto temps = measured.temperatures();
    if (std::all_of(temps.begin(), temps.end(), [&](double t) { return t == temps.front(); })) {
      fail(ErrorKind::Undefined, "measured trace is constant");
    }
  }
  const auto profile = build_profile(layout, params, blend_weight);

  CalibrationResult result;
  result.candidates = score_candidates(measured, profile, params, q_candidates, options);

  std::vector<CalibrationRow> all = result.candidates;
  auto incumbent = [&all] {
    std::vector<double> scores;
    std::vector<double> keys;
    for (const auto& r : all) {
      scores.push_back(r.discrepancy);
      keys.push_back(r.q);
    }
    return all[argmin_by_score(scores, keys)];
  };

  std::set<double> sorted(q_candidates.begin(), q_candidates.end());
  double step = 0.0;
  for (auto it = sorted.begin(); it != sorted.end() && std::next(it) != sorted.end(); ++it) {
    const double d = *std::next(it) - *it;
    if (step == 0.0 || d < step) step = d;
  }
  for (int round = 0; round < options.refine_rounds && step > 0.0; ++round) {
    step /= 10.0;
    const double center = incumbent().q;
    std::vector<double> qs;
    for (int k = -10; k <= 10; ++k) {
      const double q = center + k * step;
      if (k != 0 && q > 0.0 && !sorted.contains(q)) qs.push_back(q);
    }
    const auto rows = score_candidates(measured, profile, params, qs, options);
    for (const auto& r : rows) sorted.insert(r.q);
    result.refined.insert(result.refined.end(), rows.begin(), rows.end());
    all.insert(all.end(), rows.begin(), rows.end());
  }
  const auto best = incumbent();
  result.best_q = best.q;
  result.best_discrepancy = best.discrepancy;
  return result;
}

}  // namespace reflow
