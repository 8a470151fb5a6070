#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "avi/types.hpp"

namespace avi {

// A fully expanded simulation setup: explicit vertices plus everything
// generated from mesh and contact blocks at load time.
struct Scenario {
  int dimension = 3;
  double tick_duration = 1.0;
  Tick duration_ticks = 1;
  Configuration positions;
  Velocity velocities;
  MassModel mass;
  std::vector<PotentialTerm> terms;
  std::size_t diagnostics_stride = 100;
  std::string output_path;  // empty means "caller decides"

  // Vertex ranges [first, last) of each mesh block, in declaration
  // order, after any explicit vertices.
  struct BodyRange {
    std::size_t first = 0;
    std::size_t last = 0;
  };
  std::vector<BodyRange> bodies;
};

// Parses and validates a scenario document (JSON). Syntax errors carry
// line/column; schema and invariant violations name the field. Mesh
// blocks are expanded through build_mesh, contact blocks into
// point-point penalty terms over all cross-body vertex pairs.
Scenario load_scenario(const std::string& text);
Scenario load_scenario_file(const std::filesystem::path& path);

// Expanded form (vertices + terms only); load_scenario(serialize(s))
// reproduces s exactly.
std::string serialize_scenario(const Scenario& scenario);

SystemState initial_state(const Scenario& scenario);

}  // namespace avi
