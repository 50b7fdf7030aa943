#pragma once

// Test-only reference implementations. Nothing here calls into the code paths
// it is used to check; each routine is written from the defining formulas.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

namespace oracle {

/// y(t) for dy/dt = q (C - y), y(0) = y0.
inline double relaxation(double ambient, double y0, double q, double t) {
  return ambient + (y0 - ambient) * std::exp(-q * t);
}

/// Ambient field of the reference oven written out region by region.
inline double reference_field(double x, double tt1, double tt2, double tt3, double tt4, double tt5, double p) {
  auto sig = [x](double lo, double hi, double a, double b) { return lo + (hi - lo) / (1.0 + std::exp(-(x - (a + b) / 2.0))); };
  if (x < 25.0) return tt5;
  if (x < 197.5) return tt1;
  if (x < 202.5) return sig(tt1, tt2, 197.5, 202.5);
  if (x < 233.0) return tt2;
  if (x < 238.0) return sig(tt2, tt3, 233.0, 238.0);
  if (x < 268.5) return tt3;
  if (x < 273.5) return sig(tt3, tt4, 268.5, 273.5);
  if (x < 339.5) return tt4;
  if (x < 410.5) {
    const double line = tt4 + (tt5 - tt4) * (x - 339.5) / (410.5 - 339.5);
    const double rate = std::log(tt5 / tt4) / (410.5 - 339.5);
    const double expo = tt4 * std::exp(rate * (x - 339.5));
    return p * line + (1.0 - p) * expo;
  }
  return tt5;
}

/// Midpoint-rule measure of {t in [a, b] : f(t) > level}.
inline double brute_measure_above(const std::function<double(double)>& f, double a, double b, double level,
                                  double step) {
  const auto n = static_cast<long>(std::llround((b - a) / step));
  double total = 0.0;
  for (long i = 0; i < n; ++i) {
    if (f(a + (static_cast<double>(i) + 0.5) * step) > level) total += step;
  }
  return total;
}

/// Midpoint-rule integral of max(f - level, 0) over [a, b].
inline double brute_area_above(const std::function<double(double)>& f, double a, double b, double level,
                               double step) {
  const auto n = static_cast<long>(std::llround((b - a) / step));
  double total = 0.0;
  for (long i = 0; i < n; ++i) total += std::max(f(a + (static_cast<double>(i) + 0.5) * step) - level, 0.0) * step;
  return total;
}

/// Linear interpolation of uniformly spaced samples starting at t = 0.
inline double lerp_samples(const std::vector<double>& temps, double dt, double t) {
  const double u = t / dt;
  auto i = static_cast<std::size_t>(std::floor(u));
  if (i + 1 >= temps.size()) return temps.back();
  const double w = u - static_cast<double>(i);
  return temps[i] * (1.0 - w) + temps[i + 1] * w;
}

struct Metrics {
  double max_slope;
  double min_slope;
  std::optional<double> rise;
  double above;
  double peak;
};

/// Process metrics of uniformly spaced samples (t_i = i * dt).
inline Metrics metrics(const std::vector<double>& temps, double dt) {
  Metrics m{-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(), std::nullopt, 0.0, 0.0};
  std::vector<double> diffs(temps.size());
  std::adjacent_difference(temps.begin(), temps.end(), diffs.begin());
  for (std::size_t i = 1; i < diffs.size(); ++i) {
    m.max_slope = std::max(m.max_slope, diffs[i] / dt);
    m.min_slope = std::min(m.min_slope, diffs[i] / dt);
  }
  const auto peak_it = std::max_element(temps.begin(), temps.end());
  m.peak = *peak_it;
  const auto peak_idx = static_cast<std::size_t>(peak_it - temps.begin());
  auto crossing = [&](double level) -> std::optional<double> {
    if (temps[0] >= level) return 0.0;
    for (std::size_t i = 1; i <= peak_idx; ++i) {
      if (temps[i] >= level && temps[i - 1] < level) {
        const double frac = (level - temps[i - 1]) / (temps[i] - temps[i - 1]);
        return (static_cast<double>(i - 1) + frac) * dt;
      }
    }
    return std::nullopt;
  };
  const auto a = crossing(150.0);
  const auto b = crossing(190.0);
  if (a && b) m.rise = *b - *a;
  for (std::size_t i = 1; i < temps.size(); ++i) {
    const double lo = temps[i - 1] - 217.0;
    const double hi = temps[i] - 217.0;
    if (lo > 0.0 && hi > 0.0) {
      m.above += dt;
    } else if (lo > 0.0 || hi > 0.0) {
      const double pos = std::max(lo, hi);
      m.above += dt * pos / std::abs(hi - lo);
    }
  }
  return m;
}

struct LimitBools {
  bool slope_up, slope_down, rise, above, peak;
  bool all() const { return slope_up && slope_down && rise && above && peak; }
};

inline LimitBools limits(const Metrics& m) {
  return {m.max_slope <= 3.0, m.min_slope >= -3.0, m.rise.has_value() && *m.rise >= 60.0 && *m.rise <= 120.0,
          m.above >= 40.0 && m.above <= 90.0, m.peak >= 240.0 && m.peak <= 250.0};
}

/// Area above 217 of the linear interpolant over a uniform step `dx` in the integration variable.
inline double area_above(const std::vector<double>& temps, double dx) {
  double total = 0.0;
  for (std::size_t i = 1; i < temps.size(); ++i) {
    const double a = temps[i - 1] - 217.0;
    const double b = temps[i] - 217.0;
    if (a <= 0.0 && b <= 0.0) continue;
    if (a >= 0.0 && b >= 0.0) {
      total += dx * (a + b) / 2.0;
    } else {
      const double top = std::max(a, b);
      total += dx * top / (std::abs(a) + std::abs(b)) * top / 2.0;
    }
  }
  return total;
}

/// Mirrored-pair score at 0.5 s offsets; nullopt unless exactly one above-217 run.
inline std::optional<double> symmetry(const std::vector<double>& temps, double dt) {
  std::vector<double> starts, ends;
  bool above = temps[0] > 217.0;
  if (above) starts.push_back(0.0);
  for (std::size_t i = 1; i < temps.size(); ++i) {
    const bool now = temps[i] > 217.0;
    if (now == above) continue;
    const double t = (static_cast<double>(i - 1) + (217.0 - temps[i - 1]) / (temps[i] - temps[i - 1])) * dt;
    (now ? starts : ends).push_back(t);
    above = now;
  }
  if (above) ends.push_back(static_cast<double>(temps.size() - 1) * dt);
  if (starts.size() != 1) return std::nullopt;
  const double t1 = starts[0];
  const double t2 = ends[0];
  const double mid = (t1 + t2) / 2.0;
  double total = 0.0;
  for (int k = 1; mid - 0.5 * k >= t1 - 1e-9 && mid + 0.5 * k <= t2 + 1e-9; ++k) {
    const double d = lerp_samples(temps, dt, std::max(mid - 0.5 * k, t1)) - lerp_samples(temps, dt, std::min(mid + 0.5 * k, t2));
    total += d * d;
  }
  return total;
}

}  // namespace oracle
