#include "reflow/reflow.h"

#include <new>
#include <string>

#include "reflow/ambient.hpp"
#include "reflow/calibration.hpp"
#include "reflow/commands.hpp"
#include "reflow/config.hpp"
#include "reflow/error.hpp"
#include "reflow/optimizer.hpp"
#include "reflow/process_limits.hpp"
#include "reflow/thermal_sim.hpp"
#include "reflow/trace_io.hpp"

struct reflow_config {
  reflow::RunConfig value;
};

struct reflow_trace {
  reflow::ThermalTrace value;
};

struct reflow_buffer {
  std::string value;
};

namespace {

thread_local std::string g_last_error;

reflow_status to_status(reflow::ErrorKind kind) {
  switch (kind) {
    case reflow::ErrorKind::Domain: return REFLOW_E_DOMAIN;
    case reflow::ErrorKind::Config: return REFLOW_E_CONFIG;
    case reflow::ErrorKind::Parse: return REFLOW_E_PARSE;
    case reflow::ErrorKind::Io: return REFLOW_E_IO;
    case reflow::ErrorKind::Undefined: return REFLOW_E_UNDEFINED;
    case reflow::ErrorKind::Internal: return REFLOW_E_INTERNAL;
  }
  return REFLOW_E_INTERNAL;
}

reflow_status invalid(const char* what) {
  g_last_error = what;
  return REFLOW_E_INVALID_ARGUMENT;
}

template <typename Body>
reflow_status guarded(Body&& body) {
  try {
    g_last_error.clear();
    body();
    return REFLOW_OK;
  } catch (const reflow::Error& e) {
    g_last_error = e.what();
    return to_status(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return REFLOW_E_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return REFLOW_E_INTERNAL;
  } catch (...) {
    g_last_error = "unknown exception";
    return REFLOW_E_INTERNAL;
  }
}

void emit(reflow_buffer** out, std::string text) {
  if (out) *out = new reflow_buffer{std::move(text)};
}

reflow::TraceMetrics from_c(const reflow_metrics& m) {
  reflow::TraceMetrics out;
  out.max_slope = m.max_slope;
  out.min_slope = m.min_slope;
  if (m.has_rise_time) out.rise_time_150_190 = m.rise_time_150_190;
  out.duration_above_217 = m.duration_above_217;
  out.peak_temp = m.peak_temp;
  out.peak_time = m.peak_time;
  return out;
}

reflow_metrics to_c(const reflow::TraceMetrics& m) {
  reflow_metrics out{};
  out.max_slope = m.max_slope;
  out.min_slope = m.min_slope;
  out.has_rise_time = m.rise_time_150_190.has_value();
  out.rise_time_150_190 = m.rise_time_150_190.value_or(0.0);
  out.duration_above_217 = m.duration_above_217;
  out.peak_temp = m.peak_temp;
  out.peak_time = m.peak_time;
  return out;
}

const char* static_limit_name(std::size_t i) {
  static constexpr const char* names[REFLOW_LIMIT_COUNT] = {"max_slope", "min_slope", "rise_150_190",
                                                            "time_above_217", "peak"};
  return names[i];
}

}  // namespace

extern "C" {

const char* reflow_version(void) { return "0.1.0"; }

const char* reflow_status_name(reflow_status status) {
  switch (status) {
    case REFLOW_OK: return "ok";
    case REFLOW_E_INVALID_ARGUMENT: return "invalid argument";
    case REFLOW_E_DOMAIN: return "domain error";
    case REFLOW_E_CONFIG: return "configuration error";
    case REFLOW_E_PARSE: return "parse error";
    case REFLOW_E_IO: return "i/o error";
    case REFLOW_E_UNDEFINED: return "undefined quantity";
    case REFLOW_E_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* reflow_last_error(void) { return g_last_error.c_str(); }

reflow_status reflow_config_new(reflow_config** out) {
  if (!out) return invalid("out is NULL");
  return guarded([&] { *out = new reflow_config{}; });
}

reflow_status reflow_config_load(const char* path, reflow_config** out) {
  if (!path || !out) return invalid("path or out is NULL");
  return guarded([&] { *out = new reflow_config{reflow::load_config(path)}; });
}

reflow_status reflow_config_parse(const char* json_text, reflow_config** out) {
  if (!json_text || !out) return invalid("json_text or out is NULL");
  return guarded([&] { *out = new reflow_config{reflow::parse_config(json_text)}; });
}

void reflow_config_free(reflow_config* config) { delete config; }

reflow_status reflow_config_set(reflow_config* config, const char* key, const char* value) {
  if (!config || !key || !value) return invalid("config, key or value is NULL");
  return guarded([&] { reflow::set_config_value(config->value, key, value); });
}

reflow_status reflow_config_get(const reflow_config* config, const char* key, reflow_buffer** out) {
  if (!config || !key || !out) return invalid("config, key or out is NULL");
  return guarded([&] { emit(out, reflow::get_config_value(config->value, key)); });
}

reflow_status reflow_config_validate(const reflow_config* config) {
  if (!config) return invalid("config is NULL");
  return guarded([&] { config->value.validate(); });
}

reflow_status reflow_config_dump(const reflow_config* config, reflow_buffer** out) {
  if (!config || !out) return invalid("config or out is NULL");
  return guarded([&] { emit(out, reflow::dump_config(config->value)); });
}

size_t reflow_config_key_count(void) { return reflow::config_keys().size(); }

const char* reflow_config_key_name(size_t index) {
  const auto keys = reflow::config_keys();
  return index < keys.size() ? keys[index].name : nullptr;
}

const char* reflow_config_key_help(size_t index) {
  const auto keys = reflow::config_keys();
  return index < keys.size() ? keys[index].help : nullptr;
}

const char* reflow_buffer_data(const reflow_buffer* buffer) { return buffer ? buffer->value.c_str() : ""; }

size_t reflow_buffer_size(const reflow_buffer* buffer) { return buffer ? buffer->value.size() : 0; }

void reflow_buffer_free(reflow_buffer* buffer) { delete buffer; }

reflow_status reflow_ambient_at(const reflow_config* config, double x_cm, double* temp_c) {
  if (!config || !temp_c) return invalid("config or temp_c is NULL");
  return guarded([&] {
    const auto& c = config->value;
    c.validate();
    *temp_c = reflow::build_profile(c.layout(), c.params, c.p).at(x_cm);
  });
}

reflow_status reflow_simulate(const reflow_config* config, reflow_trace** out) {
  if (!config || !out) return invalid("config or out is NULL");
  return guarded([&] {
    const auto& c = config->value;
    c.validate();
    const auto profile = reflow::build_profile(c.layout(), c.params, c.p);
    *out = new reflow_trace{reflow::simulate(profile, c.params, reflow::WeldingModel{c.q}, c.grid)};
  });
}

reflow_status reflow_trace_load_csv(const char* path, double belt_speed, reflow_trace** out) {
  if (!path || !out) return invalid("path or out is NULL");
  return guarded([&] {
    std::optional<double> speed;
    if (belt_speed > 0.0) speed = belt_speed;
    *out = new reflow_trace{reflow::load_trace_csv(path, speed)};
  });
}

reflow_status reflow_trace_write_csv(const reflow_trace* trace, const char* path) {
  if (!trace || !path) return invalid("trace or path is NULL");
  return guarded([&] { reflow::write_trace_csv(trace->value, std::filesystem::path(path)); });
}

reflow_status reflow_trace_to_csv(const reflow_trace* trace, reflow_buffer** out) {
  if (!trace || !out) return invalid("trace or out is NULL");
  return guarded([&] { emit(out, reflow::trace_to_csv(trace->value)); });
}

void reflow_trace_free(reflow_trace* trace) { delete trace; }

size_t reflow_trace_size(const reflow_trace* trace) { return trace ? trace->value.samples.size() : 0; }

double reflow_trace_dt(const reflow_trace* trace) { return trace ? trace->value.dt_s : 0.0; }

double reflow_trace_belt_speed(const reflow_trace* trace) { return trace ? trace->value.belt_speed : 0.0; }

reflow_status reflow_trace_sample(const reflow_trace* trace, size_t index, double* t_s, double* x_cm,
                                  double* temp_c) {
  if (!trace) return invalid("trace is NULL");
  if (index >= trace->value.samples.size()) return invalid("sample index out of range");
  const auto& s = trace->value.samples[index];
  if (t_s) *t_s = s.t_s;
  if (x_cm) *x_cm = s.x_cm;
  if (temp_c) *temp_c = s.temp_c;
  g_last_error.clear();
  return REFLOW_OK;
}

reflow_status reflow_compute_metrics(const reflow_trace* trace, reflow_metrics* out) {
  if (!trace || !out) return invalid("trace or out is NULL");
  return guarded([&] { *out = to_c(reflow::compute_metrics(trace->value)); });
}

reflow_status reflow_check_limits(const reflow_config* config, const reflow_metrics* metrics, reflow_verdict* out) {
  if (!config || !metrics || !out) return invalid("config, metrics or out is NULL");
  return guarded([&] {
    config->value.limits.validate();
    const auto verdict = reflow::check_limits(from_c(*metrics), config->value.limits);
    reflow_verdict v{};
    for (std::size_t i = 0; i < verdict.rows.size(); ++i) {
      const auto& row = verdict.rows[i];
      v.rows[i] = {static_limit_name(i), row.measured.has_value(), row.measured.value_or(0.0), row.lo, row.hi,
                   row.pass};
    }
    v.pass = verdict.pass;
    *out = v;
  });
}

reflow_status reflow_discrepancy(const reflow_trace* measured, const reflow_trace* simulated, double* mse) {
  if (!measured || !simulated || !mse) return invalid("measured, simulated or mse is NULL");
  return guarded([&] { *mse = reflow::discrepancy(reflow::align(measured->value, simulated->value)); });
}

reflow_status reflow_pearson(const reflow_trace* measured, const reflow_trace* simulated, double* r) {
  if (!measured || !simulated || !r) return invalid("measured, simulated or r is NULL");
  return guarded([&] { *r = reflow::pearson(reflow::align(measured->value, simulated->value)); });
}

reflow_status reflow_area(const reflow_trace* trace, int area_domain, double* area) {
  if (!trace || !area) return invalid("trace or area is NULL");
  if (area_domain != 0 && area_domain != 1) return invalid("area_domain must be 0 (position) or 1 (time)");
  return guarded([&] {
    *area = reflow::reflow_area(trace->value,
                                area_domain == 0 ? reflow::AreaDomain::Position : reflow::AreaDomain::Time);
  });
}

reflow_status reflow_symmetry(const reflow_trace* trace, double* score) {
  if (!trace || !score) return invalid("trace or score is NULL");
  return guarded([&] { *score = reflow::symmetry_score(trace->value); });
}

reflow_status reflow_cmd_field(const reflow_config* config, reflow_buffer** csv) {
  if (!config) return invalid("config is NULL");
  return guarded([&] {
    auto text = reflow::field_csv(config->value);
    emit(csv, std::move(text));
  });
}

reflow_status reflow_cmd_simulate(const reflow_config* config, reflow_buffer** trace_csv, reflow_buffer** verdict_csv,
                                  reflow_buffer** report) {
  if (!config) return invalid("config is NULL");
  return guarded([&] {
    auto out = reflow::run_simulate(config->value);
    emit(trace_csv, std::move(out.trace_csv));
    emit(verdict_csv, std::move(out.verdict_csv));
    emit(report, std::move(out.report));
  });
}

reflow_status reflow_cmd_check(const reflow_config* config, const reflow_trace* trace, reflow_buffer** verdict_csv,
                               reflow_buffer** report) {
  if (!config || !trace) return invalid("config or trace is NULL");
  return guarded([&] {
    auto out = reflow::run_check(config->value, trace->value);
    emit(verdict_csv, std::move(out.verdict_csv));
    emit(report, std::move(out.report));
  });
}

reflow_status reflow_cmd_calibrate(const reflow_config* config, const reflow_trace* measured,
                                   reflow_buffer** table_csv, reflow_buffer** report) {
  if (!config || !measured) return invalid("config or measured is NULL");
  return guarded([&] {
    auto out = reflow::run_calibrate(config->value, measured->value);
    emit(table_csv, std::move(out.table_csv));
    emit(report, std::move(out.report));
  });
}

reflow_status reflow_cmd_optimize(const reflow_config* config, reflow_optimize_mode mode, reflow_buffer** report,
                                  reflow_buffer** candidates_csv) {
  if (!config) return invalid("config is NULL");
  if (mode < REFLOW_OPTIMIZE_SPEED || mode > REFLOW_OPTIMIZE_SYMMETRY) return invalid("unknown optimize mode");
  return guarded([&] {
    const auto m = mode == REFLOW_OPTIMIZE_SPEED  ? reflow::OptimizeMode::Speed
                   : mode == REFLOW_OPTIMIZE_AREA ? reflow::OptimizeMode::Area
                                                  : reflow::OptimizeMode::Symmetry;
    auto out = reflow::run_optimize(config->value, m);
    emit(report, std::move(out.report));
    emit(candidates_csv, std::move(out.candidates_csv));
  });
}

}  // extern "C"
