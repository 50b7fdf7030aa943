#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Run {
  int status = -1;
  std::string out;
  std::string err;
};

fs::path workdir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("reflowctl_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Run run(const std::string& args) {
  const auto out = workdir() / "stdout.txt";
  const auto err = workdir() / "stderr.txt";
  const std::string cmd = "cd '" + workdir().string() + "' && '" REFLOWCTL "' " + args + " > '" + out.string() +
                          "' 2> '" + err.string() + "'";
  const int raw = std::system(cmd.c_str());
  Run r;
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (const char c : s) n += c == '\n';
  return n;
}

// Feasible point found by the default joint sweep.
const std::string kFeasible = "--params.tt1 165 --params.tt2 185 --params.tt3 225 --params.tt4 265 --params.belt_speed 83";

}  // namespace

TEST_CASE("simulate writes the trace and the verdict table") {
  const auto r = run("simulate --io.trace_csv trace.csv --io.verdict_csv verdict.csv");
  REQUIRE(r.status == 0);
  const auto trace = slurp(workdir() / "trace.csv");
  CHECK(trace.rfind("t_s,x_cm,temp_c\n0.000000,0.000000,25.000000\n", 0) == 0);
  const auto verdict = slurp(workdir() / "verdict.csv");
  CHECK(count_lines(verdict) == 6);
  CHECK(verdict.rfind("limit,measured,lo,hi,pass\nmax_slope,", 0) == 0);
  CHECK(r.out.find("overall: FAIL") != std::string::npos);
}

TEST_CASE("simulate to stdout") {
  const auto r = run("simulate");
  REQUIRE(r.status == 0);
  CHECK(r.out.rfind("t_s,x_cm,temp_c\n", 0) == 0);
  CHECK(count_lines(r.out) == 748);
}

TEST_CASE("zero belt speed is a configuration error") {
  const auto r = run("simulate --params.belt_speed 0");
  CHECK(r.status != 0);
  CHECK(r.err.find("belt_speed") != std::string::npos);
}

TEST_CASE("unknown flags and missing files fail with a message") {
  CHECK(run("simulate --params.tt9 1").status != 0);
  const auto r = run("check /nonexistent/trace.csv");
  CHECK(r.status != 0);
  CHECK(r.err.find("/nonexistent/trace.csv") != std::string::npos);
}

TEST_CASE("calibrate recovers q from a simulated trace on disk") {
  REQUIRE(run("simulate --io.trace_csv measured.csv").status == 0);
  const auto r = run("calibrate measured.csv --io.calibration_csv calibration.csv");
  REQUIRE(r.status == 0);
  CHECK(r.out.find("best_q 0.0210") != std::string::npos);
  const auto table = slurp(workdir() / "calibration.csv");
  CHECK(table.rfind("q,discrepancy,pearson\n", 0) == 0);
  CHECK(count_lines(table) == 6);
}

TEST_CASE("check reports on an existing trace") {
  REQUIRE(run(kFeasible + " simulate --io.trace_csv good.csv").status == 0);
  const auto r = run(kFeasible + " check good.csv --io.verdict_csv good_verdict.csv");
  REQUIRE(r.status == 0);
  CHECK(r.out.find("overall: pass") != std::string::npos);
  CHECK(slurp(workdir() / "good_verdict.csv").find("false") == std::string::npos);
}

TEST_CASE("optimize-speed") {
  auto r = run("optimize-speed");
  REQUIRE(r.status == 0);
  CHECK(r.out.find("max feasible speed: none") != std::string::npos);
  r = run(kFeasible + " optimize-speed --io.candidates_csv speeds.csv");
  REQUIRE(r.status == 0);
  CHECK(r.out.find("max feasible speed: none") == std::string::npos);
  CHECK(count_lines(slurp(workdir() / "speeds.csv")) == 352);
}

TEST_CASE("optimize-area on a singleton grid") {
  const auto r = run(kFeasible +
                     " --ranges.tt1 165,165 --ranges.tt2 185,185 --ranges.tt3 225,225 --ranges.tt4 265,265"
                     " --ranges.belt_speed 83,83 optimize-area --io.candidates_csv one.csv");
  REQUIRE(r.status == 0);
  const auto csv = slurp(workdir() / "one.csv");
  CHECK(csv.rfind("tt1,tt2,tt3,tt4,v,feasible,peak,area,symmetry\n", 0) == 0);
  CHECK(count_lines(csv) == 2);
  CHECK(r.out.find("best: none") == std::string::npos);
}

TEST_CASE("field output") {
  const auto r = run("field");
  REQUIRE(r.status == 0);
  CHECK(r.out.rfind("position_cm,temp_c\n0.0,25.0000\n", 0) == 0);
  CHECK(r.out.find("\n200.0,185.0000\n") != std::string::npos);
  CHECK(count_lines(r.out) == 4357);
}

TEST_CASE("config file and dump") {
  {
    std::ofstream cfg(workdir() / "cfg.json");
    cfg << R"({"params": {"tt1": 170}, "model": {"q": 0.0205}})";
  }
  const auto r = run("-c cfg.json config");
  REQUIRE(r.status == 0);
  CHECK(r.out.find("0.0205") != std::string::npos);
  CHECK(run("-c missing.json config").status != 0);
}

TEST_CASE("reruns are byte-identical") {
  for (const std::string cmd : {"simulate --io.trace_csv a.csv --io.verdict_csv b.csv", "field --io.field_csv a.csv",
                                "calibrate measured.csv --io.calibration_csv a.csv"}) {
    const auto first = run(cmd);
    const auto a1 = slurp(workdir() / "a.csv");
    const auto second = run(cmd);
    CHECK(first.out == second.out);
    CHECK(a1 == slurp(workdir() / "a.csv"));
  }
}
