#include "reflow/ambient.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "reflow/error.hpp"

namespace reflow {

double ExpLinearBlendForm::linear_part(double x_cm) const {
  const double slope = (t_hot_c - t_cold_c) / (x_pre_cm - x_post_cm);
  return t_cold_c + slope * (x_cm - x_post_cm);
}

double ExpLinearBlendForm::exponential_part(double x_cm) const {
  // A * exp(rate * x) with A = t_hot * exp(-rate * x_pre), written relative to x_pre.
  const double rate = (std::log(t_hot_c) - std::log(t_cold_c)) / (x_pre_cm - x_post_cm);
  return t_hot_c * std::exp(rate * (x_cm - x_pre_cm));
}

double ExpLinearBlendForm::operator()(double x_cm) const {
  return weight * linear_part(x_cm) + (1.0 - weight) * exponential_part(x_cm);
}

double evaluate(const SegmentForm& form, double x_cm) {
  struct Visitor {
    double x;
    double operator()(const ConstantForm& c) const { return c.level_c; }
    double operator()(const SigmoidForm& s) const {
      return s.t_before_c + (s.t_after_c - s.t_before_c) / (1.0 + std::exp(-(x - s.center_cm)));
    }
    double operator()(const ExpLinearBlendForm& b) const { return b(x); }
  };
  return std::visit(Visitor{x_cm}, form);
}

AmbientProfile::AmbientProfile(std::vector<AmbientSegment> segments) : segments_(std::move(segments)) {
  if (segments_.empty()) fail(ErrorKind::Config, "ambient profile has no segments");
  double expected = 0.0;
  starts_.reserve(segments_.size());
  for (const auto& seg : segments_) {
    if (seg.x_start_cm != expected || !(seg.x_end_cm > seg.x_start_cm)) {
      fail(ErrorKind::Config, "ambient segments must be contiguous from 0 with positive length");
    }
    if (const auto* s = std::get_if<SigmoidForm>(&seg.form)) {
      if (s->center_cm != 0.5 * (seg.x_start_cm + seg.x_end_cm)) {
        fail(ErrorKind::Config, "sigmoid center must be the segment midpoint");
      }
    }
    if (const auto* b = std::get_if<ExpLinearBlendForm>(&seg.form)) {
      if (!(b->weight >= 0.0 && b->weight <= 1.0)) {
        fail(ErrorKind::Config, "blend weight must lie in [0, 1]");
      }
      if (!(b->t_hot_c > 0.0 && b->t_cold_c > 0.0)) {
        fail(ErrorKind::Config, "blend temperatures must be positive for the exponential part");
      }
    }
    starts_.push_back(seg.x_start_cm);
    expected = seg.x_end_cm;
  }
}

std::size_t AmbientProfile::segment_index(double x_cm) const {
  if (!(x_cm >= 0.0 && x_cm <= total_length_cm())) {
    std::ostringstream msg;
    msg << "position " << x_cm << " cm lies outside the furnace [0, " << total_length_cm() << "]";
    fail(ErrorKind::Domain, msg.str());
  }
  const auto it = std::upper_bound(starts_.begin(), starts_.end(), x_cm);
  return static_cast<std::size_t>(it - starts_.begin()) - 1;
}

double AmbientProfile::at(double x_cm) const {
  return evaluate(segments_[segment_index(x_cm)].form, x_cm);
}

namespace {

[[noreturn]] void bad_structure(const std::string& detail) {
  fail(ErrorKind::Config, "oven layout lacks the expected region structure: " + detail);
}

}  // namespace

AmbientProfile build_profile(const OvenLayout& layout, const ProcessParameters& params,
                             double blend_weight) {
  if (!(blend_weight >= 0.0 && blend_weight <= 1.0)) {
    fail(ErrorKind::Domain, "blend weight p must lie in [0, 1]");
  }
  const auto& zones = layout.zones();
  if (zones.size() < 5) bad_structure("too few regions");
  if (zones.front().kind != ZoneKind::Entry) bad_structure("first region must be the entry");
  if (zones.back().kind != ZoneKind::Exit) bad_structure("last region must be the exit");
  for (std::size_t i = 1; i + 1 < zones.size(); ++i) {
    const ZoneKind want = (i % 2 == 1) ? ZoneKind::Heated : ZoneKind::Gap;
    if (zones[i].kind != want) {
      bad_structure("region '" + zones[i].name + "' should be " + to_string(want));
    }
  }
  if (zones[zones.size() - 2].kind != ZoneKind::Heated) bad_structure("exit must follow a heated zone");

  // First gap that leads from a hotter slot into the tt5 cooling zones.
  std::size_t cooling_gap = 0;
  for (std::size_t i = 2; i + 1 < zones.size(); i += 2) {
    if (zones[i + 1].setpoint_slot == Slot::Tt5 && zones[i - 1].setpoint_slot != Slot::Tt5) {
      cooling_gap = i;
      break;
    }
  }
  if (cooling_gap == 0) bad_structure("no gap leads into tt5 cooling zones");
  for (std::size_t i = 1; i + 1 < zones.size(); i += 2) {
    const bool after = i > cooling_gap;
    if (after != (zones[i].setpoint_slot == Slot::Tt5)) {
      bad_structure("tt5 zones must form one contiguous group before the exit");
    }
  }

  std::vector<AmbientSegment> segments;
  segments.push_back({0.0, zones.front().end_cm, ConstantForm{params.tt5}});

  Slot plateau_slot = *zones[1].setpoint_slot;
  double plateau_start = zones[1].start_cm;
  for (std::size_t gap = 2; gap < cooling_gap; gap += 2) {
    const Slot next = *zones[gap + 1].setpoint_slot;
    if (next == plateau_slot) continue;
    const double before = params.setpoint(plateau_slot);
    const double after = params.setpoint(next);
    segments.push_back({plateau_start, zones[gap].start_cm, ConstantForm{before}});
    const double center = 0.5 * (zones[gap].start_cm + zones[gap].end_cm);
    segments.push_back({zones[gap].start_cm, zones[gap].end_cm, SigmoidForm{before, after, center}});
    plateau_slot = next;
    plateau_start = zones[gap].end_cm;
  }
  segments.push_back({plateau_start, zones[cooling_gap].start_cm, ConstantForm{params.setpoint(plateau_slot)}});

  const double t_hot = params.setpoint(plateau_slot);
  if (!(t_hot > 0.0 && params.tt5 > 0.0)) {
    fail(ErrorKind::Config, "cooling blend needs positive temperatures on both sides");
  }
  const double x_pre = zones[cooling_gap].start_cm;
  const double x_post = zones[zones.size() - 2].end_cm;
  segments.push_back({x_pre, x_post, ExpLinearBlendForm{t_hot, params.tt5, x_pre, x_post, blend_weight}});
  segments.push_back({x_post, zones.back().end_cm, ConstantForm{params.tt5}});
  return AmbientProfile(std::move(segments));
}

}  // namespace reflow
