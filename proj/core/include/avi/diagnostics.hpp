#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "avi/types.hpp"

namespace avi {

struct DiagnosticsSample {
  double time = 0.0;
  double total_energy = 0.0;
  double kinetic = 0.0;
  double potential = 0.0;
  std::array<double, 3> linear_momentum{0.0, 0.0, 0.0};
  std::array<double, 3> angular_momentum{0.0, 0.0, 0.0};
  bool operator==(const DiagnosticsSample&) const = default;
};

// Samples are strictly increasing in time; total = kinetic + potential
// by construction. Warnings are free-form, tagged with the event time.
struct DiagnosticsRecord {
  std::vector<DiagnosticsSample> samples;
  std::vector<std::string> warnings;
};

struct DriftReport {
  double initial_energy = 0.0;
  // max_t |E(t) - E(0)|, and the same divided by |E(0)| (left absolute
  // when E(0) == 0).
  double max_abs_deviation = 0.0;
  double relative_band_halfwidth = 0.0;
  // Ordinary least-squares slope of E against t, energy per unit time.
  double least_squares_slope = 0.0;
  // max_t |p(t) - p(0)| / max(1, |p(0)|), Euclidean norms.
  double linear_momentum_deviation = 0.0;
  double angular_momentum_deviation = 0.0;
};

// Throws ContractError on fewer than two samples or non-increasing times.
DriftReport analyze(const DiagnosticsRecord& record);

// CSV with exact header
//   time,total,kinetic,potential,px,py,pz,lx,ly,lz
// and one %.17g row per sample, so values round-trip bit-exactly.
// Warnings are not part of the CSV.
void write_csv(const DiagnosticsRecord& record, std::ostream& out);
void write_csv(const DiagnosticsRecord& record,
               const std::filesystem::path& path);

// Inverse of write_csv on the sample table. Throws IoError on a missing
// file, a wrong header, or a malformed row.
DiagnosticsRecord read_csv(std::istream& in);
DiagnosticsRecord read_csv(const std::filesystem::path& path);

// Human-readable multi-line summary of a report.
std::string describe(const DriftReport& report);

}  // namespace avi
