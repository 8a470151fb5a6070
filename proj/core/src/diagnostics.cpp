#include "avi/diagnostics.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include "avi/errors.hpp"

namespace avi {

namespace {

constexpr const char* kHeader = "time,total,kinetic,potential,px,py,pz,lx,ly,lz";

double norm3(const std::array<double, 3>& a) {
  return std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]);
}

double diff_norm3(const std::array<double, 3>& a,
                  const std::array<double, 3>& b) {
  const double d0 = a[0] - b[0], d1 = a[1] - b[1], d2 = a[2] - b[2];
  return std::sqrt(d0 * d0 + d1 * d1 + d2 * d2);
}

void append_value(std::string& out, double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  out += buf;
}

}  // namespace

DriftReport analyze(const DiagnosticsRecord& record) {
  const auto& s = record.samples;
  if (s.size() < 2) {
    throw ContractError("analyze: need at least two samples, got " +
                        std::to_string(s.size()));
  }
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (!(s[i].time > s[i - 1].time)) {
      throw ContractError("analyze: sample times must be strictly increasing");
    }
  }

  DriftReport r;
  r.initial_energy = s.front().total_energy;

  double max_dev = 0.0, max_dp = 0.0, max_dl = 0.0;
  double mean_t = 0.0, mean_e = 0.0;
  for (const auto& smp : s) {
    mean_t += smp.time;
    mean_e += smp.total_energy;
  }
  mean_t /= static_cast<double>(s.size());
  mean_e /= static_cast<double>(s.size());

  double cov = 0.0, var = 0.0;
  for (const auto& smp : s) {
    max_dev = std::max(max_dev, std::abs(smp.total_energy - r.initial_energy));
    max_dp = std::max(
        max_dp, diff_norm3(smp.linear_momentum, s.front().linear_momentum));
    max_dl = std::max(
        max_dl, diff_norm3(smp.angular_momentum, s.front().angular_momentum));
    const double dt = smp.time - mean_t;
    cov += dt * (smp.total_energy - mean_e);
    var += dt * dt;
  }

  r.max_abs_deviation = max_dev;
  r.relative_band_halfwidth =
      r.initial_energy == 0.0 ? max_dev : max_dev / std::abs(r.initial_energy);
  r.least_squares_slope = cov / var;
  r.linear_momentum_deviation =
      max_dp / std::max(1.0, norm3(s.front().linear_momentum));
  r.angular_momentum_deviation =
      max_dl / std::max(1.0, norm3(s.front().angular_momentum));
  return r;
}

void write_csv(const DiagnosticsRecord& record, std::ostream& out) {
  std::string line;
  out << kHeader << '\n';
  for (const auto& s : record.samples) {
    line.clear();
    append_value(line, s.time);
    for (double x : {s.total_energy, s.kinetic, s.potential,
                     s.linear_momentum[0], s.linear_momentum[1],
                     s.linear_momentum[2], s.angular_momentum[0],
                     s.angular_momentum[1], s.angular_momentum[2]}) {
      line += ',';
      append_value(line, x);
    }
    line += '\n';
    out << line;
  }
}

void write_csv(const DiagnosticsRecord& record,
               const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open '" + path.string() + "' for writing");
  }
  write_csv(record, out);
  out.flush();
  if (!out) {
    throw IoError("failed writing '" + path.string() + "'");
  }
}

DiagnosticsRecord read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw IoError("diagnostics csv: empty input");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kHeader) {
    throw IoError("diagnostics csv: unexpected header '" + line + "'");
  }

  DiagnosticsRecord record;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    double vals[10];
    const char* p = line.c_str();
    for (int f = 0; f < 10; ++f) {
      char* end = nullptr;
      vals[f] = std::strtod(p, &end);
      if (end == p) {
        throw IoError("diagnostics csv: row " + std::to_string(row) +
                      ": field " + std::to_string(f + 1) + " is not a number");
      }
      p = end;
      if (f < 9) {
        if (*p != ',') {
          throw IoError("diagnostics csv: row " + std::to_string(row) +
                        ": expected 10 comma-separated fields");
        }
        ++p;
      }
    }
    if (*p != '\0') {
      throw IoError("diagnostics csv: row " + std::to_string(row) +
                    ": trailing characters");
    }

    DiagnosticsSample s;
    s.time = vals[0];
    s.total_energy = vals[1];
    s.kinetic = vals[2];
    s.potential = vals[3];
    s.linear_momentum = {vals[4], vals[5], vals[6]};
    s.angular_momentum = {vals[7], vals[8], vals[9]};
    record.samples.push_back(s);
  }
  return record;
}

DiagnosticsRecord read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path.string() + "' for reading");
  }
  return read_csv(in);
}

std::string describe(const DriftReport& report) {
  std::ostringstream out;
  char buf[64];
  auto put = [&](const char* label, double x) {
    std::snprintf(buf, sizeof(buf), "%-28s % .6e\n", label, x);
    out << buf;
  };
  put("initial energy", report.initial_energy);
  put("energy band halfwidth (rel)", report.relative_band_halfwidth);
  put("energy drift slope", report.least_squares_slope);
  put("linear momentum deviation", report.linear_momentum_deviation);
  put("angular momentum deviation", report.angular_momentum_deviation);
  return out.str();
}

}  // namespace avi
