#include "reflow/geometry.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "reflow/error.hpp"

namespace reflow {

const char* to_string(ZoneKind kind) noexcept {
  switch (kind) {
    case ZoneKind::Entry: return "entry";
    case ZoneKind::Heated: return "heated";
    case ZoneKind::Gap: return "gap";
    case ZoneKind::Exit: return "exit";
  }
  return "?";
}

const char* to_string(Slot slot) noexcept {
  switch (slot) {
    case Slot::Tt1: return "tt1";
    case Slot::Tt2: return "tt2";
    case Slot::Tt3: return "tt3";
    case Slot::Tt4: return "tt4";
    case Slot::Tt5: return "tt5";
  }
  return "?";
}

std::optional<ZoneKind> parse_zone_kind(std::string_view text) {
  for (auto kind : {ZoneKind::Entry, ZoneKind::Heated, ZoneKind::Gap, ZoneKind::Exit}) {
    if (text == to_string(kind)) return kind;
  }
  return std::nullopt;
}

std::optional<Slot> parse_slot(std::string_view text) {
  for (auto slot : {Slot::Tt1, Slot::Tt2, Slot::Tt3, Slot::Tt4, Slot::Tt5}) {
    if (text == to_string(slot)) return slot;
  }
  return std::nullopt;
}

OvenLayout::OvenLayout(std::vector<ZoneSpec> zones) : zones_(std::move(zones)) {
  if (zones_.empty()) fail(ErrorKind::Config, "oven layout has no zones");
  double expected_start = 0.0;
  for (const auto& zone : zones_) {
    if (!(zone.end_cm > zone.start_cm)) {
      fail(ErrorKind::Config, "zone '" + zone.name + "' must have end_cm > start_cm");
    }
    // Adjacent boundaries are copied from the same decimal literal, so exact equality holds.
    if (zone.start_cm != expected_start) {
      std::ostringstream msg;
      msg << "zone '" << zone.name << "' starts at " << zone.start_cm << " cm, expected "
          << expected_start << " cm (zones must be contiguous from 0)";
      fail(ErrorKind::Config, msg.str());
    }
    const bool heated = zone.kind == ZoneKind::Heated;
    if (heated && !zone.setpoint_slot) {
      fail(ErrorKind::Config, "heated zone '" + zone.name + "' needs a setpoint slot");
    }
    if (!heated && zone.setpoint_slot) {
      fail(ErrorKind::Config, "zone '" + zone.name + "' is not heated but carries a setpoint slot");
    }
    expected_start = zone.end_cm;
  }
}

OvenLayout default_layout() {
  constexpr double kEntry = 25.0;
  constexpr double kZone = 30.5;
  constexpr double kGap = 5.0;
  constexpr std::array<Slot, 11> kSlots = {Slot::Tt1, Slot::Tt1, Slot::Tt1, Slot::Tt1,
                                           Slot::Tt1, Slot::Tt2, Slot::Tt3, Slot::Tt4,
                                           Slot::Tt4, Slot::Tt5, Slot::Tt5};
  std::vector<ZoneSpec> zones;
  zones.push_back({"entry", ZoneKind::Entry, 0.0, kEntry, std::nullopt});
  double x = kEntry;
  // All boundaries are multiples of 0.5 and therefore exact in binary floating point.
  for (std::size_t i = 0; i < kSlots.size(); ++i) {
    zones.push_back({"zone " + std::to_string(i + 1), ZoneKind::Heated, x, x + kZone, kSlots[i]});
    x += kZone;
    if (i + 1 < kSlots.size()) {
      zones.push_back({"gap " + std::to_string(i + 1), ZoneKind::Gap, x, x + kGap, std::nullopt});
      x += kGap;
    }
  }
  zones.push_back({"exit", ZoneKind::Exit, x, x + kEntry, std::nullopt});
  return OvenLayout(std::move(zones));
}

double ProcessParameters::setpoint(Slot slot) const {
  switch (slot) {
    case Slot::Tt1: return tt1;
    case Slot::Tt2: return tt2;
    case Slot::Tt3: return tt3;
    case Slot::Tt4: return tt4;
    case Slot::Tt5: return tt5;
  }
  fail(ErrorKind::Internal, "unknown setpoint slot");
}

void ParameterRanges::validate() const {
  const std::array<std::pair<const char*, Interval>, 6> slots = {{{"tt1", tt1},
                                                                  {"tt2", tt2},
                                                                  {"tt3", tt3},
                                                                  {"tt4", tt4},
                                                                  {"tt5", tt5},
                                                                  {"belt_speed", belt_speed}}};
  for (const auto& [name, range] : slots) {
    if (!(range.lo <= range.hi)) {
      fail(ErrorKind::Config, std::string("range for ") + name + " has lower bound above upper bound");
    }
  }
  if (!(temp_step > 0.0)) fail(ErrorKind::Config, "temperature step must be positive");
  if (!(speed_step > 0.0)) fail(ErrorKind::Config, "speed step must be positive");
  if (!(speed_sweep_step > 0.0)) fail(ErrorKind::Config, "speed sweep step must be positive");
}

std::vector<ParameterViolation> validate_parameters(const ProcessParameters& params,
                                                    const ParameterRanges& ranges) {
  const std::array<ParameterViolation, 6> checks = {{{"tt1", params.tt1, ranges.tt1},
                                                     {"tt2", params.tt2, ranges.tt2},
                                                     {"tt3", params.tt3, ranges.tt3},
                                                     {"tt4", params.tt4, ranges.tt4},
                                                     {"tt5", params.tt5, ranges.tt5},
                                                     {"belt_speed", params.belt_speed, ranges.belt_speed}}};
  std::vector<ParameterViolation> report;
  for (const auto& check : checks) {
    if (!check.allowed.contains(check.value)) report.push_back(check);
  }
  return report;
}

double position_at_time(double speed_cm_per_min, double time_s) {
  if (!(speed_cm_per_min > 0.0)) fail(ErrorKind::Domain, "belt_speed must be positive");
  if (!(time_s >= 0.0)) fail(ErrorKind::Domain, "time must be non-negative");
  return speed_cm_per_min / 60.0 * time_s;
}

double time_at_position(double speed_cm_per_min, double position_cm) {
  if (!(speed_cm_per_min > 0.0)) fail(ErrorKind::Domain, "belt_speed must be positive");
  if (!(position_cm >= 0.0)) fail(ErrorKind::Domain, "position must be non-negative");
  return position_cm * 60.0 / speed_cm_per_min;
}

}  // namespace reflow
