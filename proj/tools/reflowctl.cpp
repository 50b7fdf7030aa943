// reflowctl: command-line front end over the reflow C API.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "reflow/reflow.h"

namespace {

struct ConfigDeleter {
  void operator()(reflow_config* c) const { reflow_config_free(c); }
};
struct TraceDeleter {
  void operator()(reflow_trace* t) const { reflow_trace_free(t); }
};
struct BufferDeleter {
  void operator()(reflow_buffer* b) const { reflow_buffer_free(b); }
};
using ConfigPtr = std::unique_ptr<reflow_config, ConfigDeleter>;
using TracePtr = std::unique_ptr<reflow_trace, TraceDeleter>;
using BufferPtr = std::unique_ptr<reflow_buffer, BufferDeleter>;

struct Failure {
  reflow_status status;
  std::string message;
};

void check(reflow_status status) {
  if (status != REFLOW_OK) throw Failure{status, reflow_last_error()};
}

std::string get_key(const reflow_config* config, const char* key) {
  reflow_buffer* raw = nullptr;
  check(reflow_config_get(config, key, &raw));
  BufferPtr buf(raw);
  return reflow_buffer_data(buf.get());
}

void write_file(const std::string& path, const reflow_buffer* buf) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Failure{REFLOW_E_IO, "cannot open '" + path + "' for writing"};
  out.write(reflow_buffer_data(buf), static_cast<std::streamsize>(reflow_buffer_size(buf)));
  if (!out) throw Failure{REFLOW_E_IO, "failed writing '" + path + "'"};
}

void print(std::FILE* stream, const reflow_buffer* buf) {
  std::fwrite(reflow_buffer_data(buf), 1, reflow_buffer_size(buf), stream);
  std::fflush(stream);
}

/// Writes to `path` when set, otherwise to `fallback`.
void deliver(const std::string& path, const reflow_buffer* buf, std::FILE* fallback) {
  if (!path.empty()) {
    write_file(path, buf);
  } else if (fallback) {
    print(fallback, buf);
  }
}

TracePtr load_trace(const reflow_config* config, const std::string& path) {
  if (path.empty()) throw Failure{REFLOW_E_INVALID_ARGUMENT, "no input trace given (positional argument or --io.measured_csv)"};
  const double speed = std::strtod(get_key(config, "params.belt_speed").c_str(), nullptr);
  reflow_trace* raw = nullptr;
  check(reflow_trace_load_csv(path.c_str(), speed, &raw));
  return TracePtr(raw);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reflow oven thermal-profile simulator and optimizer"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  app.add_option("-c,--config", config_path, "JSON configuration file")->check(CLI::ExistingFile);

  // One flag per configuration key, applied on top of the file.
  std::map<std::string, std::string> overrides;
  for (std::size_t i = 0; i < reflow_config_key_count(); ++i) {
    const std::string key = reflow_config_key_name(i);
    app.add_option_function<std::string>(
           "--" + key, [&overrides, key](const std::string& v) { overrides[key] = v; }, reflow_config_key_help(i))
        ->group("Configuration keys");
  }

  auto* field = app.add_subcommand("field", "ambient temperature field as position_cm,temp_c");
  auto* simulate = app.add_subcommand("simulate", "simulate the weld-center trace and check process limits");
  auto* check_cmd = app.add_subcommand("check", "check process limits of an existing trace CSV");
  auto* calibrate = app.add_subcommand("calibrate", "grid-search q (and optionally p) against a measured trace");
  auto* opt_speed = app.add_subcommand("optimize-speed", "largest feasible belt speed at fixed setpoints");
  auto* opt_area = app.add_subcommand("optimize-area", "feasible setpoints/speed with the smallest reflow area");
  auto* opt_sym = app.add_subcommand("optimize-symmetry", "feasible setpoints/speed with the most symmetric reflow peak");
  auto* show = app.add_subcommand("config", "print the resolved configuration as JSON");

  std::string input_path;
  check_cmd->add_option("trace", input_path, "trace CSV (t_s,temp_c or t_s,x_cm,temp_c)");
  calibrate->add_option("measured", input_path, "measured trace CSV (t_s,temp_c or t_s,x_cm,temp_c)");

  CLI11_PARSE(app, argc, argv);

  try {
    reflow_config* raw = nullptr;
    check(config_path.empty() ? reflow_config_new(&raw) : reflow_config_load(config_path.c_str(), &raw));
    ConfigPtr config(raw);
    for (const auto& [key, value] : overrides) check(reflow_config_set(config.get(), key.c_str(), value.c_str()));

    reflow_buffer* a = nullptr;
    reflow_buffer* b = nullptr;
    reflow_buffer* c = nullptr;
    if (field->parsed()) {
      check(reflow_cmd_field(config.get(), &a));
      BufferPtr csv(a);
      deliver(get_key(config.get(), "io.field_csv"), csv.get(), stdout);
    } else if (simulate->parsed()) {
      check(reflow_cmd_simulate(config.get(), &a, &b, &c));
      BufferPtr trace(a), verdict(b), report(c);
      const std::string trace_path = get_key(config.get(), "io.trace_csv");
      deliver(trace_path, trace.get(), stdout);
      deliver(get_key(config.get(), "io.verdict_csv"), verdict.get(), nullptr);
      print(trace_path.empty() ? stderr : stdout, report.get());
    } else if (check_cmd->parsed()) {
      if (input_path.empty()) input_path = get_key(config.get(), "io.measured_csv");
      auto trace = load_trace(config.get(), input_path);
      check(reflow_cmd_check(config.get(), trace.get(), &a, &b));
      BufferPtr verdict(a), report(b);
      deliver(get_key(config.get(), "io.verdict_csv"), verdict.get(), nullptr);
      print(stdout, report.get());
    } else if (calibrate->parsed()) {
      if (input_path.empty()) input_path = get_key(config.get(), "io.measured_csv");
      auto measured = load_trace(config.get(), input_path);
      check(reflow_cmd_calibrate(config.get(), measured.get(), &a, &b));
      BufferPtr table(a), report(b);
      deliver(get_key(config.get(), "io.calibration_csv"), table.get(), nullptr);
      print(stdout, report.get());
    } else if (opt_speed->parsed() || opt_area->parsed() || opt_sym->parsed()) {
      const auto mode = opt_speed->parsed()  ? REFLOW_OPTIMIZE_SPEED
                        : opt_area->parsed() ? REFLOW_OPTIMIZE_AREA
                                             : REFLOW_OPTIMIZE_SYMMETRY;
      check(reflow_cmd_optimize(config.get(), mode, &a, &b));
      BufferPtr report(a), candidates(b);
      deliver(get_key(config.get(), "io.candidates_csv"), candidates.get(), nullptr);
      print(stdout, report.get());
    } else if (show->parsed()) {
      check(reflow_config_validate(config.get()));
      check(reflow_config_dump(config.get(), &a));
      BufferPtr dump(a);
      print(stdout, dump.get());
    }
  } catch (const Failure& f) {
    std::fprintf(stderr, "reflowctl: %s: %s\n", reflow_status_name(f.status), f.message.c_str());
    return 1;
  }
  return 0;
}
