#include "reflow/trace_io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

#include "reflow/error.hpp"

namespace reflow {

void write_trace_csv(const ThermalTrace& trace, std::ostream& out) {
  out << "t_s,x_cm,temp_c\n" << std::fixed << std::setprecision(6);
  for (const auto& s : trace.samples) out << s.t_s << ',' << s.x_cm << ',' << s.temp_c << '\n';
}

void write_trace_csv(const ThermalTrace& trace, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Io, "cannot open '" + path.string() + "' for writing");
  write_trace_csv(trace, out);
  if (!out) fail(ErrorKind::Io, "failed writing '" + path.string() + "'");
}

std::string trace_to_csv(const ThermalTrace& trace) {
  std::ostringstream out;
  write_trace_csv(trace, out);
  return out.str();
}

namespace {

std::string trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  return std::string(text.substr(first, last - first + 1));
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

[[noreturn]] void parse_error(const std::string& source, std::size_t line, const std::string& what) {
  std::ostringstream msg;
  msg << source << ":" << line << ": " << what;
  fail(ErrorKind::Parse, msg.str());
}

double parse_number(const std::string& text, const std::string& source, std::size_t line) {
  if (text.empty()) parse_error(source, line, "empty field");
  errno = 0;
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size() || errno == ERANGE || !std::isfinite(value)) {
    parse_error(source, line, "'" + text + "' is not a finite number");
  }
  return value;
}

struct Row {
  std::size_t line;
  double t;
  double x;
  double temp;
};

}  // namespace

ThermalTrace parse_trace_csv(std::istream& in, std::optional<double> belt_speed, const std::string& source) {
  std::string raw;
  std::size_t line_no = 0;
  bool have_header = false;
  bool has_x = false;
  std::vector<Row> rows;
  while (std::getline(in, raw)) {
    ++line_no;
    if (line_no == 1 && raw.starts_with("\xEF\xBB\xBF")) raw.erase(0, 3);
    const std::string line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split_fields(line);
    if (!have_header) {
      if (fields == std::vector<std::string>{"t_s", "temp_c"}) {
        has_x = false;
      } else if (fields == std::vector<std::string>{"t_s", "x_cm", "temp_c"}) {
        has_x = true;
      } else {
        parse_error(source, line_no, "expected header 't_s,temp_c' or 't_s,x_cm,temp_c', got '" + line + "'");
      }
      have_header = true;
      continue;
    }
    const std::size_t want = has_x ? 3 : 2;
    if (fields.size() != want) {
      parse_error(source, line_no, "expected " + std::to_string(want) + " fields, got " + std::to_string(fields.size()));
    }
    Row row{line_no, parse_number(fields[0], source, line_no), 0.0, 0.0};
    if (has_x) {
      row.x = parse_number(fields[1], source, line_no);
      row.temp = parse_number(fields[2], source, line_no);
    } else {
      row.temp = parse_number(fields[1], source, line_no);
    }
    if (row.t < 0.0) parse_error(source, line_no, "negative time");
    if (!rows.empty() && !(row.t > rows.back().t)) {
      parse_error(source, line_no, "time column is not strictly increasing");
    }
    rows.push_back(row);
  }
  if (!have_header) parse_error(source, line_no, "missing header");
  if (rows.size() < 2) parse_error(source, line_no, "a trace needs at least two samples");

  // Name the first row whose own spacing breaks rank before checking drift.
  const double first_step = rows[1].t - rows[0].t;
  for (std::size_t i = 2; i < rows.size(); ++i) {
    if (std::abs(rows[i].t - rows[i - 1].t - first_step) > 1e-6 + 1e-12) {
      parse_error(source, rows[i].line, "sample spacing is not uniform");
    }
  }
  const double t0 = rows.front().t;
  const double dt = (rows.back().t - t0) / static_cast<double>(rows.size() - 1);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (std::abs(rows[i].t - (t0 + static_cast<double>(i) * dt)) > 1e-6) {
      parse_error(source, rows[i].line, "sample spacing is not uniform");
    }
  }

  double speed = 0.0;
  if (has_x) {
    speed = rows.back().x / rows.back().t * 60.0;
  } else if (belt_speed) {
    speed = *belt_speed;
  } else {
    parse_error(source, rows.front().line, "belt speed is required to reconstruct positions");
  }
  if (!(speed > 0.0)) parse_error(source, rows.front().line, "belt_speed must be positive");

  ThermalTrace trace;
  trace.dt_s = dt;
  trace.belt_speed = speed;
  trace.samples.reserve(rows.size());
  for (const auto& r : rows) {
    const double x = speed / 60.0 * r.t;
    if (has_x && std::abs(r.x - x) > 1e-6 * std::max(1.0, std::abs(x))) {
      parse_error(source, r.line, "x_cm is inconsistent with the belt speed");
    }
    trace.samples.push_back({r.t, has_x ? r.x : x, r.temp});
  }
  return trace;
}

ThermalTrace load_trace_csv(const std::filesystem::path& path, std::optional<double> belt_speed) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open '" + path.string() + "'");
  return parse_trace_csv(in, belt_speed, path.string());
}

}  // namespace reflow
