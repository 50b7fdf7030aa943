#include <algorithm>

#include "reflow/ambient.hpp"
#include "reflow/calibration.hpp"
#include "reflow/error.hpp"
#include "reflow/thermal_sim.hpp"

namespace reflow {

BlendFit fit_blend_weight(const ThermalTrace& measured, const OvenLayout& layout,
                          const ProcessParameters& params, double q,
                          std::span<const double> weight_candidates, const SimulationGrid& grid) {
  if (weight_candidates.empty()) fail(ErrorKind::Domain, "blend weight candidate list is empty");
  if (measured.samples.empty()) fail(ErrorKind::Domain, "measured trace is empty");
  const double cooling_start = time_at_position(params.belt_speed, [&] {
    const auto profile = build_profile(layout, params, weight_candidates.front());
    for (const auto& seg : profile.segments()) {
      if (std::holds_alternative<ExpLinearBlendForm>(seg.form)) return seg.x_start_cm;
    }
    return profile.total_length_cm();
  }());
  if (measured.samples.back().t_s < cooling_start) {
    fail(ErrorKind::Domain, "measured trace ends before the cooling region");
  }

  BlendFit fit;
  std::vector<double> scores;
  for (const double p : weight_candidates) {
    const auto profile = build_profile(layout, params, p);
    const auto sim = simulate(profile, params, WeldingModel{q}, grid);
    const double d = discrepancy(align(measured, sim));
    fit.candidates.push_back({p, d});
    scores.push_back(d);
  }
  fit.best_weight = weight_candidates[argmin_by_score(scores, weight_candidates)];
  return fit;
}

}  // namespace reflow
