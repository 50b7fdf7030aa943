#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace reflow {

enum class ZoneKind { Entry, Heated, Gap, Exit };

/// Setpoint slots of the oven controller. Heated zones reference one of them;
/// Tt5 doubles as the exterior air temperature.
enum class Slot { Tt1, Tt2, Tt3, Tt4, Tt5 };

const char* to_string(ZoneKind kind) noexcept;
const char* to_string(Slot slot) noexcept;
std::optional<ZoneKind> parse_zone_kind(std::string_view text);
std::optional<Slot> parse_slot(std::string_view text);

struct ZoneSpec {
  std::string name;
  ZoneKind kind = ZoneKind::Heated;
  double start_cm = 0.0;
  double end_cm = 0.0;
  std::optional<Slot> setpoint_slot;

  double length_cm() const { return end_cm - start_cm; }

  bool operator==(const ZoneSpec&) const = default;
};

/// Ordered, contiguous regions of the furnace starting at 0.
class OvenLayout {
 public:
  /// Validates contiguity and zone invariants; throws Error(Config) otherwise.
  explicit OvenLayout(std::vector<ZoneSpec> zones);

  const std::vector<ZoneSpec>& zones() const { return zones_; }
  double total_length_cm() const { return zones_.back().end_cm; }

  bool operator==(const OvenLayout&) const = default;

 private:
  std::vector<ZoneSpec> zones_;
};

/// 25 cm entry, 11 heated zones of 30.5 cm separated by 5 cm gaps, 25 cm exit.
OvenLayout default_layout();

struct ProcessParameters {
  double tt1 = 175.0;
  double tt2 = 195.0;
  double tt3 = 235.0;
  double tt4 = 255.0;
  double tt5 = 25.0;
  double belt_speed = 70.0;  // cm/min

  double setpoint(Slot slot) const;
  double speed_cm_per_s() const { return belt_speed / 60.0; }

  bool operator==(const ProcessParameters&) const = default;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double value) const { return value >= lo && value <= hi; }
  bool operator==(const Interval&) const = default;
};

struct ParameterRanges {
  Interval tt1{165.0, 185.0};
  Interval tt2{185.0, 205.0};
  Interval tt3{225.0, 245.0};
  Interval tt4{245.0, 265.0};
  Interval tt5{25.0, 25.0};
  Interval belt_speed{65.0, 100.0};
  double temp_step = 5.0;          // °C, joint sweeps
  double speed_step = 1.0;         // cm/min, joint sweeps
  double speed_sweep_step = 0.1;   // cm/min, single-variable speed sweep

  /// Throws Error(Config) when an interval is inverted or a step is not positive.
  void validate() const;
};

struct ParameterViolation {
  std::string name;  // "tt1" .. "tt5", "belt_speed"
  double value = 0.0;
  Interval allowed;
};

/// Empty result means every slot lies inside its closed interval.
std::vector<ParameterViolation> validate_parameters(const ProcessParameters& params,
                                                    const ParameterRanges& ranges);

/// Conveyor position (cm) after `time_s` seconds at `speed_cm_per_min`.
double position_at_time(double speed_cm_per_min, double time_s);

/// Time (s) at which the conveyor reaches `position_cm`.
double time_at_position(double speed_cm_per_min, double position_cm);

}  // namespace reflow
