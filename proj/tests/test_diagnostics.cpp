#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "avi/diagnostics.hpp"
#include "avi/errors.hpp"
#include "testutil.hpp"

using namespace avi;

namespace {

DiagnosticsSample sample_at(double t, double e) {
  DiagnosticsSample s;
  s.time = t;
  s.total_energy = e;
  s.kinetic = e;
  return s;
}

DiagnosticsRecord random_record(std::mt19937_64& rng, std::size_t n) {
  DiagnosticsRecord r;
  double t = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    t += avitest::uniform(rng, 0.01, 1.0);
    DiagnosticsSample s;
    s.time = t;
    s.kinetic = avitest::uniform(rng, 0.0, 5.0);
    s.potential = avitest::uniform(rng, -2.0, 5.0);
    s.total_energy = s.kinetic + s.potential;
    for (int c = 0; c < 3; ++c) {
      s.linear_momentum[static_cast<std::size_t>(c)] =
          avitest::uniform(rng, -3.0, 3.0);
      s.angular_momentum[static_cast<std::size_t>(c)] =
          avitest::uniform(rng, -3.0, 3.0);
    }
    r.samples.push_back(s);
  }
  return r;
}

}  // namespace

TEST_CASE("constant energy yields a zero report") {
  DiagnosticsRecord r;
  for (int i = 0; i < 10; ++i) r.samples.push_back(sample_at(i, 2.5));
  const auto report = analyze(r);
  CHECK(report.initial_energy == 2.5);
  CHECK(report.max_abs_deviation == 0.0);
  CHECK(report.relative_band_halfwidth == 0.0);
  CHECK(std::abs(report.least_squares_slope) < 1e-14);
}

TEST_CASE("sinusoidal energy: band reflects amplitude, slope stays small") {
  DiagnosticsRecord r;
  const int n = 4000;
  for (int i = 0; i < n; ++i) {
    const double t = 0.05 * i;  // 200 time units, ~30 periods
    r.samples.push_back(sample_at(t, 1.0 + 0.01 * std::sin(t)));
  }
  const auto report = analyze(r);
  CHECK(report.relative_band_halfwidth == doctest::Approx(0.01).epsilon(0.01));
  CHECK(std::abs(report.least_squares_slope) <= 1e-4);
}

TEST_CASE("linear energy trend recovers the slope") {
  DiagnosticsRecord r;
  for (int i = 0; i < 200; ++i) {
    const double t = 0.5 * i;
    r.samples.push_back(sample_at(t, 1.0 + 1e-3 * t));
  }
  const auto report = analyze(r);
  CHECK(report.least_squares_slope == doctest::Approx(1e-3).epsilon(1e-9));
}

TEST_CASE("zero initial energy falls back to absolute band") {
  DiagnosticsRecord r;
  r.samples.push_back(sample_at(0.0, 0.0));
  r.samples.push_back(sample_at(1.0, 0.25));
  const auto report = analyze(r);
  CHECK(report.relative_band_halfwidth == doctest::Approx(0.25));
}

TEST_CASE("momentum deviations use the larger of 1 and the initial norm") {
  DiagnosticsRecord r;
  DiagnosticsSample a = sample_at(0.0, 1.0);
  a.linear_momentum = {3.0, 4.0, 0.0};  // norm 5
  DiagnosticsSample b = sample_at(1.0, 1.0);
  b.linear_momentum = {3.0, 4.0, 1.0};
  r.samples = {a, b};
  const auto report = analyze(r);
  CHECK(report.linear_momentum_deviation == doctest::Approx(0.2));

  // Small initial momentum: absolute deviation.
  a.linear_momentum = {0.0, 0.0, 0.0};
  b.linear_momentum = {0.0, 0.0, 0.5};
  r.samples = {a, b};
  CHECK(analyze(r).linear_momentum_deviation == doctest::Approx(0.5));
}

TEST_CASE("analyze is invariant under uniform time shifts") {
  std::mt19937_64 rng(31);
  DiagnosticsRecord r = random_record(rng, 300);
  const auto base = analyze(r);
  DiagnosticsRecord shifted = r;
  for (auto& s : shifted.samples) s.time += 1000.0;
  const auto moved = analyze(shifted);
  CHECK(std::abs(moved.least_squares_slope - base.least_squares_slope) <
        1e-12 * std::max(1.0, std::abs(base.least_squares_slope)));
  CHECK(moved.relative_band_halfwidth ==
        doctest::Approx(base.relative_band_halfwidth).epsilon(1e-12));
}

TEST_CASE("analyze rejects degenerate records") {
  DiagnosticsRecord r;
  CHECK_THROWS_AS(analyze(r), ContractError);
  r.samples.push_back(sample_at(0.0, 1.0));
  CHECK_THROWS_AS(analyze(r), ContractError);
  r.samples.push_back(sample_at(0.0, 1.0));  // equal times
  CHECK_THROWS_AS(analyze(r), ContractError);
}

TEST_CASE("csv format: header only for an empty record, 2 lines for one sample") {
  DiagnosticsRecord r;
  std::ostringstream empty;
  write_csv(r, empty);
  CHECK(empty.str() == "time,total,kinetic,potential,px,py,pz,lx,ly,lz\n");

  r.samples.push_back(sample_at(0.0, 1.0));
  std::ostringstream one;
  write_csv(r, one);
  const std::string text = one.str();
  CHECK(std::count(text.begin(), text.end(), '\n') == 2);
}

TEST_CASE("csv round-trips every floating-point value bit-exactly") {
  std::mt19937_64 rng(37);
  DiagnosticsRecord r = random_record(rng, 500);
  // Exercise awkward values too.
  r.samples[0].total_energy = 0.1;
  r.samples[1].total_energy = 1.0 / 3.0;
  r.samples[2].total_energy = 1e-300;
  r.samples[3].total_energy = -1.2345678901234567e+250;

  std::ostringstream out;
  write_csv(r, out);
  std::istringstream in(out.str());
  const DiagnosticsRecord back = read_csv(in);

  REQUIRE(back.samples.size() == r.samples.size());
  for (std::size_t i = 0; i < r.samples.size(); ++i) {
    CHECK(back.samples[i] == r.samples[i]);
  }

  // And the re-serialization is byte-identical.
  std::ostringstream again;
  write_csv(back, again);
  CHECK(again.str() == out.str());
}

TEST_CASE("csv reader rejects malformed input") {
  std::istringstream no_header("not,a,header\n");
  CHECK_THROWS_AS(read_csv(no_header), IoError);

  std::istringstream short_row(
      "time,total,kinetic,potential,px,py,pz,lx,ly,lz\n1,2,3\n");
  CHECK_THROWS_AS(read_csv(short_row), IoError);

  std::istringstream bad_field(
      "time,total,kinetic,potential,px,py,pz,lx,ly,lz\n"
      "0,x,0,0,0,0,0,0,0,0\n");
  CHECK_THROWS_AS(read_csv(bad_field), IoError);

  std::istringstream trailing(
      "time,total,kinetic,potential,px,py,pz,lx,ly,lz\n"
      "0,0,0,0,0,0,0,0,0,0,junk\n");
  CHECK_THROWS_AS(read_csv(trailing), IoError);
}

TEST_CASE("file round-trip and missing-file errors") {
  namespace fs = std::filesystem;
  const fs::path path = fs::temp_directory_path() / "avi_diag_test.csv";

  std::mt19937_64 rng(41);
  DiagnosticsRecord r = random_record(rng, 50);
  write_csv(r, path);
  const DiagnosticsRecord back = read_csv(path);
  REQUIRE(back.samples.size() == r.samples.size());
  for (std::size_t i = 0; i < r.samples.size(); ++i) {
    CHECK(back.samples[i] == r.samples[i]);
  }
  fs::remove(path);

  CHECK_THROWS_AS(read_csv(fs::path("/nonexistent/avi.csv")), IoError);
}

TEST_CASE("report summary names every tracked quantity") {
  DriftReport rep;
  rep.initial_energy = 1.5;
  rep.relative_band_halfwidth = 2e-3;
  const std::string text = describe(rep);
  CHECK(text.find("initial energy") != std::string::npos);
  CHECK(text.find("band halfwidth") != std::string::npos);
  CHECK(text.find("drift slope") != std::string::npos);
  CHECK(text.find("momentum deviation") != std::string::npos);
}
