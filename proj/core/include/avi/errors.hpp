#pragma once

#include <stdexcept>
#include <string>

namespace avi {

// Base class for every error thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A caller broke a documented precondition or a value invariant
// (mismatched sizes, non-finite input, parameter out of range).
struct ContractError : Error {
  using Error::Error;
};

// Geometry too degenerate to evaluate, e.g. a hinge triangle whose
// area is below 1e-12 times the squared shared-edge length.
struct DegenerateGeometryError : Error {
  using Error::Error;
};

// Event schedule construction or query failure (empty term list,
// out-of-range event index, exhausted runner, overflow risk).
struct ScheduleError : Error {
  using Error::Error;
};

// Scenario text rejected: syntax error, schema violation, or a value
// that breaks a system invariant. Messages name the offending field.
struct ScenarioError : Error {
  using Error::Error;
};

// Filesystem read/write failure or malformed diagnostics CSV.
struct IoError : Error {
  using Error::Error;
};

}  // namespace avi
