#pragma once

#include <span>
#include <variant>
#include <vector>

#include "reflow/geometry.hpp"

namespace reflow {

struct ConstantForm {
  double level_c = 0.0;
  bool operator==(const ConstantForm&) const = default;
};

/// Logistic transition with unit steepness per cm:
/// t_before + (t_after - t_before) / (1 + exp(-(x - center_cm))).
struct SigmoidForm {
  double t_before_c = 0.0;
  double t_after_c = 0.0;
  double center_cm = 0.0;
  bool operator==(const SigmoidForm&) const = default;
};

/// Cooling-region field: weight * line + (1 - weight) * exponential, both
/// passing through (x_pre, t_hot) and (x_post, t_cold).
struct ExpLinearBlendForm {
  double t_hot_c = 0.0;
  double t_cold_c = 0.0;
  double x_pre_cm = 0.0;
  double x_post_cm = 0.0;
  double weight = 0.8;
  bool operator==(const ExpLinearBlendForm&) const = default;

  double linear_part(double x_cm) const;
  double exponential_part(double x_cm) const;
  double operator()(double x_cm) const;
};

using SegmentForm = std::variant<ConstantForm, SigmoidForm, ExpLinearBlendForm>;

struct AmbientSegment {
  double x_start_cm = 0.0;
  double x_end_cm = 0.0;
  SegmentForm form;
  bool operator==(const AmbientSegment&) const = default;
};

/// Piecewise ambient temperature field over [0, total length]. Immutable.
class AmbientProfile {
 public:
  /// Throws Error(Config) unless segments are contiguous from 0, sigmoid
  /// centers are midpoints and blend weights lie in [0, 1].
  explicit AmbientProfile(std::vector<AmbientSegment> segments);

  const std::vector<AmbientSegment>& segments() const { return segments_; }
  double total_length_cm() const { return segments_.back().x_end_cm; }

  /// Index of the segment evaluated at x: joins belong to the later segment,
  /// the furnace end belongs to the last. Throws Error(Domain) outside [0, L].
  std::size_t segment_index(double x_cm) const;

  double at(double x_cm) const;

 private:
  std::vector<AmbientSegment> segments_;
  std::vector<double> starts_;
};

double evaluate(const SegmentForm& form, double x_cm);

/// Piecewise field for a layout: constant plateaus per setpoint group, gaps
/// between equal slots absorbed into the plateau, sigmoid transitions across
/// gaps that change slot, and the exponential/linear blend from the first gap
/// leading into the tt5 cooling zones up to the end of the last heated zone.
AmbientProfile build_profile(const OvenLayout& layout, const ProcessParameters& params,
                             double blend_weight);

inline double ambient_at(const AmbientProfile& profile, double x_cm) { return profile.at(x_cm); }

struct BlendCandidate {
  double weight = 0.0;
  double discrepancy = 0.0;  // °C²
};

struct BlendFit {
  double best_weight = 0.0;
  std::vector<BlendCandidate> candidates;
};

struct ThermalTrace;
struct SimulationGrid;

/// Grid search over blend weights: simulate at each candidate and score
/// against `measured` by mean squared error. Ties go to the smaller weight.
BlendFit fit_blend_weight(const ThermalTrace& measured, const OvenLayout& layout,
                          const ProcessParameters& params, double q,
                          std::span<const double> weight_candidates, const SimulationGrid& grid);

}  // namespace reflow
