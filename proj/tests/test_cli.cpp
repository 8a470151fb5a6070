#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "avi/cli.hpp"

namespace {

namespace fs = std::filesystem;

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

CliResult run(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("avi-sim");
  for (const std::string& a : args) argv.push_back(a.c_str());

  std::ostringstream out, err;
  std::streambuf* old_out = std::cout.rdbuf(out.rdbuf());
  std::streambuf* old_err = std::cerr.rdbuf(err.rdbuf());
  CliResult result;
  try {
    result.code = avi::run_cli(static_cast<int>(argv.size()), argv.data());
  } catch (...) {
    std::cout.rdbuf(old_out);
    std::cerr.rdbuf(old_err);
    throw;
  }
  std::cout.rdbuf(old_out);
  std::cerr.rdbuf(old_err);
  result.out = out.str();
  result.err = err.str();
  return result;
}

std::string scenario(const char* name) {
  return std::string(AVI_SCENARIO_DIR) + "/" + name;
}

fs::path work_dir() {
  const fs::path dir = fs::temp_directory_path() / "avi_cli_test";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::size_t line_count(const std::string& text) {
  std::size_t n = 0;
  for (char c : text) n += c == '\n';
  return n;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  REQUIRE(out.good());
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("simulate writes a diagnostics csv and reports the run") {
  const fs::path csv = work_dir() / "osc_sim.csv";
  fs::remove(csv);

  const CliResult r = run({"simulate", scenario("oscillator.json"), "--out",
                           csv.string(), "--duration-ticks", "500", "--stride",
                           "10"});
  CHECK(r.code == 0);
  CHECK(r.err.empty());
  CHECK(contains(r.out, "2 vertices, 1 terms, 501 events"));
  CHECK(contains(r.out, "samples: 51"));
  CHECK(contains(r.out, "initial energy"));

  REQUIRE(fs::exists(csv));
  const std::string text = slurp(csv);
  CHECK(text.rfind("time,total,kinetic,potential,", 0) == 0);
  // Header plus one row per sample.
  CHECK(line_count(text) == 52);
}

TEST_CASE("simulate honors the scenario output field when --out is absent") {
  const fs::path dir = work_dir();
  const fs::path csv = dir / "from_field.csv";
  fs::remove(csv);

  std::string doc = R"({
  "tick_duration": 0.1,
  "duration_ticks": 50,
  "diagnostics_stride": 10,
  "output": ")" + csv.string() + R"(",
  "vertices": [
    { "pos": [0.0, 0.0, 0.0], "mass": 1e30 },
    { "pos": [2.0, 0.0, 0.0], "mass": 1.0 }
  ],
  "terms": [
    { "kind": "spring", "stencil": [0, 1], "step_ticks": 1,
      "params": { "stiffness": 1.0, "rest_length": 1.0 } }
  ]
})";
  const fs::path input = dir / "with_output.json";
  write_file(input, doc);

  const CliResult r = run({"simulate", input.string()});
  CHECK(r.code == 0);
  CHECK(fs::exists(csv));
  CHECK(contains(r.out, csv.string()));

  SUBCASE("--out takes precedence over the field") {
    const fs::path forced = dir / "forced.csv";
    fs::remove(forced);
    fs::remove(csv);
    const CliResult r2 = run({"simulate", input.string(), "--out",
                              forced.string()});
    CHECK(r2.code == 0);
    CHECK(fs::exists(forced));
    CHECK(!fs::exists(csv));
  }
}

TEST_CASE("check validates a scenario and reports the schedule") {
  const CliResult r = run({"check", scenario("oscillator.json")});
  CHECK(r.code == 0);
  CHECK(r.err.empty());
  CHECK(contains(r.out, ": OK"));
  CHECK(contains(r.out, "dimension 3, 2 vertices, 1 terms"));
  CHECK(contains(r.out, "schedule: 10001 events"));
  CHECK(contains(r.out, "all linearizable terms within their stable step estimates"));
}

TEST_CASE("check flags steps above the stable estimate") {
  const fs::path input = work_dir() / "too_coarse.json";
  write_file(input, R"({
  "tick_duration": 1.0,
  "duration_ticks": 10,
  "vertices": [
    { "pos": [0.0, 0.0, 0.0], "mass": 1.0 },
    { "pos": [2.0, 0.0, 0.0], "mass": 1.0 }
  ],
  "terms": [
    { "kind": "spring", "stencil": [0, 1], "step_ticks": 2,
      "params": { "stiffness": 1.0, "rest_length": 1.0 } }
  ]
})");

  const CliResult r = run({"check", input.string()});
  CHECK(r.code == 0);
  // Stable step for k=1 between two unit masses is sqrt(2); actual is 2.
  CHECK(contains(r.out, "term 0 (spring): step 2 exceeds stable estimate"));
  CHECK(!contains(r.out, "all linearizable terms"));
}

TEST_CASE("scenario errors name the offending field and exit 1") {
  const CliResult r = run({"check", scenario("bad_index.json")});
  CHECK(r.code == 1);
  CHECK(contains(r.err, "error:"));
  CHECK(contains(r.err, "terms[0]"));
  CHECK(contains(r.err, "out of range"));
}

TEST_CASE("missing files and bad flags use distinct exit codes") {
  SUBCASE("nonexistent scenario is a runtime error") {
    const CliResult r = run({"check", "no_such_scenario.json"});
    CHECK(r.code == 1);
    CHECK(contains(r.err, "error:"));
  }
  SUBCASE("no subcommand") {
    CHECK(run({}).code == 2);
  }
  SUBCASE("unknown subcommand") {
    CHECK(run({"frobnicate"}).code == 2);
  }
  SUBCASE("simulate without a scenario") {
    CHECK(run({"simulate"}).code == 2);
  }
  SUBCASE("oracle requires --h") {
    CHECK(run({"oracle", scenario("oscillator.json")}).code == 2);
  }
  SUBCASE("duration override must be positive") {
    const CliResult r = run({"simulate", scenario("oscillator.json"),
                             "--duration-ticks", "0"});
    CHECK(r.code == 2);
  }
  SUBCASE("help exits 0") {
    const CliResult r = run({"--help"});
    CHECK(r.code == 0);
    CHECK(contains(r.out, "avi-sim"));
  }
}

TEST_CASE("oracle writes a reference trajectory csv") {
  const fs::path csv = work_dir() / "osc_oracle.csv";
  fs::remove(csv);

  const CliResult r = run({"oracle", scenario("oscillator.json"), "--h", "0.05",
                           "--out", csv.string(), "--stride", "200"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "reference run"));
  // 1000 time units at h=0.05 is 20000 steps; every 200th plus the start.
  CHECK(contains(r.out, "101 samples"));
  REQUIRE(fs::exists(csv));
  CHECK(line_count(slurp(csv)) == 102);
}

TEST_CASE("repeated simulate runs are byte-identical") {
  const fs::path a = work_dir() / "det_a.csv";
  const fs::path b = work_dir() / "det_b.csv";
  fs::remove(a);
  fs::remove(b);

  const std::vector<std::string> base = {"simulate",
                                         scenario("two_body_bounce.json"),
                                         "--duration-ticks", "6000",
                                         "--stride", "10"};
  std::vector<std::string> run_a = base;
  run_a.insert(run_a.end(), {"--out", a.string()});
  std::vector<std::string> run_b = base;
  run_b.insert(run_b.end(), {"--out", b.string()});

  REQUIRE(run(run_a).code == 0);
  REQUIRE(run(run_b).code == 0);
  const std::string text_a = slurp(a);
  CHECK(text_a == slurp(b));
  CHECK(line_count(text_a) > 100);
}
