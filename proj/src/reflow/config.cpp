#include "reflow/config.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#include <json.hpp>

#include "reflow/ambient.hpp"
#include "reflow/error.hpp"

namespace reflow {

namespace {

using Json = nlohmann::ordered_json;

enum class ValueKind { Number, Unsigned, Integer, Bool, Text, Interval, NumberList, Domain };

struct KeyImpl {
  ConfigKey key;
  ValueKind kind;
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

[[noreturn]] void bad_value(std::string_view key, std::string_view value, const char* expected) {
  fail(ErrorKind::Config, std::string(key) + ": '" + std::string(value) + "' is not " + expected);
}

std::string format_number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::string trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t");
  return std::string(text.substr(first, last - first + 1));
}

double parse_double(std::string_view key, std::string_view text) {
  const std::string s = trim(text);
  if (s.empty()) bad_value(key, text, "a number");
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v)) bad_value(key, text, "a finite number");
  return v;
}

long long parse_integer(std::string_view key, std::string_view text) {
  const std::string s = trim(text);
  long long v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size()) bad_value(key, text, "an integer");
  return v;
}

std::vector<double> parse_list(std::string_view key, std::string_view text) {
  std::vector<double> out;
  std::string item;
  std::istringstream in{std::string(text)};
  while (std::getline(in, item, ',')) out.push_back(parse_double(key, item));
  if (out.empty()) bad_value(key, text, "a non-empty comma separated list");
  return out;
}

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format_number(values[i]);
  }
  return out;
}

template <typename Access>
KeyImpl number(const char* name, const char* help, Access access) {
  return {{name, help}, ValueKind::Number,
          [access, name](RunConfig& c, std::string_view v) { access(c) = parse_double(name, v); },
          [access](const RunConfig& c) { return format_number(access(c)); }};
}

template <typename Access>
KeyImpl interval(const char* name, const char* help, Access access) {
  return {{name, help}, ValueKind::Interval,
          [access, name](RunConfig& c, std::string_view v) {
            const auto values = parse_list(name, v);
            if (values.size() != 2) bad_value(name, v, "an interval 'lo,hi'");
            access(c) = Interval{values[0], values[1]};
          },
          [access](const RunConfig& c) {
            const Interval& iv = access(c);
            return format_number(iv.lo) + "," + format_number(iv.hi);
          }};
}

template <typename Access>
KeyImpl number_list(const char* name, const char* help, Access access) {
  return {{name, help}, ValueKind::NumberList,
          [access, name](RunConfig& c, std::string_view v) { access(c) = parse_list(name, v); },
          [access](const RunConfig& c) { return join(access(c)); }};
}

template <typename Access>
KeyImpl flag(const char* name, const char* help, Access access) {
  return {{name, help}, ValueKind::Bool,
          [access, name](RunConfig& c, std::string_view v) {
            const std::string s = trim(v);
            if (s == "true" || s == "1" || s == "yes") {
              access(c) = true;
            } else if (s == "false" || s == "0" || s == "no") {
              access(c) = false;
            } else {
              bad_value(name, v, "a boolean");
            }
          },
          [access](const RunConfig& c) { return std::string(access(c) ? "true" : "false"); }};
}

template <typename Access>
KeyImpl text(const char* name, const char* help, Access access) {
  return {{name, help}, ValueKind::Text,
          [access](RunConfig& c, std::string_view v) { access(c) = std::string(v); },
          [access](const RunConfig& c) { return access(c); }};
}

const std::vector<KeyImpl>& registry() {
  static const std::vector<KeyImpl> keys = [] {
    std::vector<KeyImpl> k;
    k.push_back(number("params.tt1", "zones 1-5 setpoint (C)", [](auto& c) -> auto& { return c.params.tt1; }));
    k.push_back(number("params.tt2", "zone 6 setpoint (C)", [](auto& c) -> auto& { return c.params.tt2; }));
    k.push_back(number("params.tt3", "zone 7 setpoint (C)", [](auto& c) -> auto& { return c.params.tt3; }));
    k.push_back(number("params.tt4", "zones 8-9 setpoint (C)", [](auto& c) -> auto& { return c.params.tt4; }));
    k.push_back(number("params.tt5", "zones 10-11 and exterior air (C)", [](auto& c) -> auto& { return c.params.tt5; }));
    k.push_back(number("params.belt_speed", "conveyor speed (cm/min)", [](auto& c) -> auto& { return c.params.belt_speed; }));
    k.push_back(flag("params.validate", "reject setpoints outside ranges.*", [](auto& c) -> auto& { return c.validate_ranges; }));
    k.push_back(number("model.q", "welding coefficient (1/s)", [](auto& c) -> auto& { return c.q; }));
    k.push_back(number("model.p", "cooling blend weight in [0,1]", [](auto& c) -> auto& { return c.p; }));
    k.push_back(number("grid.dt", "RK4 step (s)", [](auto& c) -> auto& { return c.grid.dt_s; }));
    k.push_back(number("grid.dt_out", "output sample interval (s)", [](auto& c) -> auto& { return c.grid.dt_out_s; }));
    k.push_back(number("field.dx", "ambient field sampling step (cm)", [](auto& c) -> auto& { return c.field_dx; }));
    k.push_back(interval("ranges.tt1", "tt1 range lo,hi (C)", [](auto& c) -> auto& { return c.ranges.tt1; }));
    k.push_back(interval("ranges.tt2", "tt2 range lo,hi (C)", [](auto& c) -> auto& { return c.ranges.tt2; }));
    k.push_back(interval("ranges.tt3", "tt3 range lo,hi (C)", [](auto& c) -> auto& { return c.ranges.tt3; }));
    k.push_back(interval("ranges.tt4", "tt4 range lo,hi (C)", [](auto& c) -> auto& { return c.ranges.tt4; }));
    k.push_back(interval("ranges.tt5", "tt5 range lo,hi (C)", [](auto& c) -> auto& { return c.ranges.tt5; }));
    k.push_back(interval("ranges.belt_speed", "speed range lo,hi (cm/min)", [](auto& c) -> auto& { return c.ranges.belt_speed; }));
    k.push_back(number("ranges.temp_step", "joint sweep temperature step (C)", [](auto& c) -> auto& { return c.ranges.temp_step; }));
    k.push_back(number("ranges.speed_step", "joint sweep speed step (cm/min)", [](auto& c) -> auto& { return c.ranges.speed_step; }));
    k.push_back(number("ranges.speed_sweep_step", "speed-only sweep step (cm/min)", [](auto& c) -> auto& { return c.ranges.speed_sweep_step; }));
    k.push_back(number("limits.slope_max", "max heating slope (C/s)", [](auto& c) -> auto& { return c.limits.slope_max; }));
    k.push_back(number("limits.slope_min", "max cooling slope, negative (C/s)", [](auto& c) -> auto& { return c.limits.slope_min; }));
    k.push_back(interval("limits.rise_150_190", "150->190 C rise time lo,hi (s)", [](auto& c) -> auto& { return c.limits.rise_150_190; }));
    k.push_back(interval("limits.time_above_217", "time above 217 C lo,hi (s)", [](auto& c) -> auto& { return c.limits.time_above_217; }));
    k.push_back(interval("limits.peak", "peak temperature lo,hi (C)", [](auto& c) -> auto& { return c.limits.peak; }));
    k.push_back({{"optimize.area_domain", "reflow area integration variable: position|time"}, ValueKind::Domain,
                 [](RunConfig& c, std::string_view v) {
                   const std::string s = trim(v);
                   if (s == "position") {
                     c.area_domain = AreaDomain::Position;
                   } else if (s == "time") {
                     c.area_domain = AreaDomain::Time;
                   } else {
                     bad_value("optimize.area_domain", v, "'position' or 'time'");
                   }
                 },
                 [](const RunConfig& c) { return std::string(to_string(c.area_domain)); }});
    k.push_back(flag("optimize.refine", "refine joint sweeps 5x around the incumbent", [](auto& c) -> auto& { return c.refine; }));
    k.push_back({{"optimize.workers", "sweep worker threads (0 = all cores)"}, ValueKind::Unsigned,
                 [](RunConfig& c, std::string_view v) {
                   const auto n = parse_integer("optimize.workers", v);
                   if (n < 0 || n > 4096) bad_value("optimize.workers", v, "a worker count in [0, 4096]");
                   c.workers = static_cast<unsigned>(n);
                 },
                 [](const RunConfig& c) { return std::to_string(c.workers); }});
    k.push_back(number_list("calibration.q_candidates", "q grid", [](auto& c) -> auto& { return c.q_candidates; }));
    k.push_back(number_list("calibration.p_candidates", "blend weight grid", [](auto& c) -> auto& { return c.p_candidates; }));
    k.push_back({{"calibration.refine_rounds", "q refinement rounds (step / 10 each)"}, ValueKind::Integer,
                 [](RunConfig& c, std::string_view v) {
                   const auto n = parse_integer("calibration.refine_rounds", v);
                   if (n < 0 || n > 8) bad_value("calibration.refine_rounds", v, "a round count in [0, 8]");
                   c.refine_rounds = static_cast<int>(n);
                 },
                 [](const RunConfig& c) { return std::to_string(c.refine_rounds); }});
    k.push_back(flag("calibration.fit_p", "fit the blend weight before q", [](auto& c) -> auto& { return c.fit_p; }));
    k.push_back(text("io.trace_csv", "simulate: trace CSV output path", [](auto& c) -> auto& { return c.io.trace_csv; }));
    k.push_back(text("io.verdict_csv", "verdict CSV output path", [](auto& c) -> auto& { return c.io.verdict_csv; }));
    k.push_back(text("io.field_csv", "field: CSV output path", [](auto& c) -> auto& { return c.io.field_csv; }));
    k.push_back(text("io.candidates_csv", "optimize: candidate CSV output path", [](auto& c) -> auto& { return c.io.candidates_csv; }));
    k.push_back(text("io.calibration_csv", "calibrate: table CSV output path", [](auto& c) -> auto& { return c.io.calibration_csv; }));
    k.push_back(text("io.measured_csv", "calibrate/check: input trace path", [](auto& c) -> auto& { return c.io.measured_csv; }));
    return k;
  }();
  return keys;
}

const KeyImpl& find_key(std::string_view name) {
  for (const auto& k : registry()) {
    if (name == k.key.name) return k;
  }
  fail(ErrorKind::Config, "unknown configuration key '" + std::string(name) + "'");
}

std::string json_scalar_text(const std::string& key, const Json& value) {
  if (value.is_boolean()) return value.get<bool>() ? "true" : "false";
  if (value.is_number_integer()) return std::to_string(value.get<long long>());
  if (value.is_number()) return format_number(value.get<double>());
  if (value.is_string()) return value.get<std::string>();
  fail(ErrorKind::Config, key + ": unsupported value " + value.dump());
}

std::string json_value_text(const std::string& key, const Json& value) {
  if (!value.is_array()) return json_scalar_text(key, value);
  std::string out;
  for (std::size_t i = 0; i < value.size(); ++i) {
    if (!value[i].is_number()) fail(ErrorKind::Config, key + ": list entries must be numbers");
    if (i) out += ',';
    out += json_scalar_text(key, value[i]);
  }
  return out;
}

OvenLayout parse_layout(const Json& node) {
  if (!node.is_object()) fail(ErrorKind::Config, "layout must be an object with a 'zones' array");
  for (const auto& [k, _] : node.items()) {
    if (k != "zones") fail(ErrorKind::Config, "unknown configuration key 'layout." + k + "'");
  }
  if (!node.contains("zones") || !node["zones"].is_array()) fail(ErrorKind::Config, "layout.zones must be an array");
  std::vector<ZoneSpec> zones;
  for (const auto& z : node["zones"]) {
    if (!z.is_object()) fail(ErrorKind::Config, "layout.zones entries must be objects");
    ZoneSpec spec;
    bool has_kind = false, has_start = false, has_end = false;
    for (const auto& [k, v] : z.items()) {
      if (k == "name" && v.is_string()) {
        spec.name = v.get<std::string>();
      } else if (k == "kind" && v.is_string()) {
        const auto kind = parse_zone_kind(v.get<std::string>());
        if (!kind) fail(ErrorKind::Config, "layout zone kind '" + v.get<std::string>() + "' is unknown");
        spec.kind = *kind;
        has_kind = true;
      } else if (k == "start_cm" && v.is_number()) {
        spec.start_cm = v.get<double>();
        has_start = true;
      } else if (k == "end_cm" && v.is_number()) {
        spec.end_cm = v.get<double>();
        has_end = true;
      } else if (k == "slot" && v.is_string()) {
        const auto slot = parse_slot(v.get<std::string>());
        if (!slot) fail(ErrorKind::Config, "layout zone slot '" + v.get<std::string>() + "' is unknown");
        spec.setpoint_slot = slot;
      } else {
        fail(ErrorKind::Config, "layout zone field '" + k + "' is unknown or has the wrong type");
      }
    }
    if (!has_kind || !has_start || !has_end) fail(ErrorKind::Config, "layout zones need kind, start_cm and end_cm");
    zones.push_back(std::move(spec));
  }
  return OvenLayout(std::move(zones));
}

}  // namespace

ModelSettings RunConfig::model_settings() const {
  ModelSettings m;
  m.q = q;
  m.blend_weight = p;
  m.grid = grid;
  m.limits = limits;
  m.area_domain = area_domain;
  return m;
}

void RunConfig::validate() const {
  if (!(params.belt_speed > 0.0)) fail(ErrorKind::Config, "params.belt_speed must be positive");
  ranges.validate();
  if (validate_ranges) {
    const auto violations = validate_parameters(params, ranges);
    if (!violations.empty()) {
      std::ostringstream msg;
      msg << "parameters outside their ranges:";
      for (const auto& v : violations) {
        msg << " params." << v.name << "=" << v.value << " not in [" << v.allowed.lo << ", " << v.allowed.hi << "];";
      }
      fail(ErrorKind::Config, msg.str());
    }
  }
  if (!(q > 0.0)) fail(ErrorKind::Config, "model.q must be positive");
  if (!(p >= 0.0 && p <= 1.0)) fail(ErrorKind::Config, "model.p must lie in [0, 1]");
  grid.stride();
  if (!(field_dx > 0.0)) fail(ErrorKind::Config, "field.dx must be positive");
  limits.validate();
  for (const double c : q_candidates) {
    if (!(c > 0.0)) fail(ErrorKind::Config, "calibration.q_candidates must be positive");
  }
  for (const double c : p_candidates) {
    if (!(c >= 0.0 && c <= 1.0)) fail(ErrorKind::Config, "calibration.p_candidates must lie in [0, 1]");
  }
  build_profile(layout(), params, p);
}

std::span<const ConfigKey> config_keys() {
  static const std::vector<ConfigKey> keys = [] {
    std::vector<ConfigKey> out;
    for (const auto& k : registry()) out.push_back(k.key);
    return out;
  }();
  return keys;
}

void set_config_value(RunConfig& config, std::string_view key, std::string_view value) {
  find_key(key).set(config, value);
}

std::string get_config_value(const RunConfig& config, std::string_view key) {
  return find_key(key).get(config);
}

RunConfig parse_config(std::string_view json_text, const std::string& source) {
  Json doc;
  try {
    doc = Json::parse(json_text.begin(), json_text.end(), nullptr, true, true);
  } catch (const Json::parse_error& e) {
    fail(ErrorKind::Config, source + ": " + e.what());
  }
  if (!doc.is_object()) fail(ErrorKind::Config, source + ": top level must be an object");
  RunConfig config;
  for (const auto& [section, body] : doc.items()) {
    if (section == "layout") {
      config.layout_override = parse_layout(body);
      continue;
    }
    const bool known = std::any_of(config_keys().begin(), config_keys().end(), [&](const ConfigKey& k) {
      return std::string_view(k.name).starts_with(section + ".");
    });
    if (!known) fail(ErrorKind::Config, source + ": unknown configuration section '" + section + "'");
    if (!body.is_object()) fail(ErrorKind::Config, source + ": section '" + section + "' must be an object");
    for (const auto& [name, value] : body.items()) {
      const std::string key = section + "." + name;
      set_config_value(config, key, json_value_text(key, value));
    }
  }
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open config '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.string());
}

std::string dump_config(const RunConfig& config) {
  Json doc = Json::object();
  for (const auto& k : registry()) {
    const std::string name = k.key.name;
    const auto dot = name.find('.');
    const std::string section = name.substr(0, dot);
    const std::string field = name.substr(dot + 1);
    const std::string value = k.get(config);
    Json& slot = doc[section][field];
    switch (k.kind) {
      case ValueKind::Number:
        slot = parse_double(name, value);
        break;
      case ValueKind::Unsigned:
      case ValueKind::Integer:
        slot = parse_integer(name, value);
        break;
      case ValueKind::Bool:
        slot = value == "true";
        break;
      case ValueKind::Interval:
      case ValueKind::NumberList:
        slot = parse_list(name, value);
        break;
      case ValueKind::Text:
      case ValueKind::Domain:
        slot = value;
        break;
    }
  }
  if (config.layout_override) {
    Json zones = Json::array();
    for (const auto& z : config.layout_override->zones()) {
      Json entry = {{"name", z.name}, {"kind", to_string(z.kind)}, {"start_cm", z.start_cm}, {"end_cm", z.end_cm}};
      if (z.setpoint_slot) entry["slot"] = to_string(*z.setpoint_slot);
      zones.push_back(std::move(entry));
    }
    doc["layout"]["zones"] = std::move(zones);
  }
  return doc.dump(2) + "\n";
}

}  // namespace reflow
