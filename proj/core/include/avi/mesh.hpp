#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "avi/types.hpp"

namespace avi {

// Shared elastic parameters for generated mesh terms. Rest lengths and
// rest angles are always read off the built geometry, so a freshly
// built mesh carries zero elastic energy.
struct MeshMaterial {
  double vertex_mass = 1.0;
  double spring_stiffness = 0.0;
  double hinge_stiffness = 0.0;
  Tick spring_step_ticks = 1;
  Tick hinge_step_ticks = 1;
};

// count vertices along +x at the given spacing, count-1 springs.
struct ChainSpec {
  std::size_t count = 2;
  double spacing = 1.0;
};

// nx-by-ny vertex grid in the z=0 plane, centered on the origin.
// Springs on every axis-aligned edge plus one diagonal per cell; each
// cell is split into two triangles along that diagonal and hinges join
// every interior shared edge.
struct GridPlateSpec {
  std::size_t nx = 2;
  std::size_t ny = 2;
  double spacing = 1.0;
  // Overrides vertex_mass on boundary vertices; a huge value pins the
  // rim in place.
  std::optional<double> boundary_mass;
};

// Icosahedron subdivided `subdivisions` times, vertices projected to
// the sphere of the given radius about `center`. Springs on every edge,
// hinges on every pair of adjacent faces.
struct ShellSphereSpec {
  unsigned subdivisions = 0;
  double radius = 1.0;
  std::array<double, 3> center{0.0, 0.0, 0.0};
};

using MeshShape = std::variant<ChainSpec, GridPlateSpec, ShellSphereSpec>;

struct MeshBuilderSpec {
  MeshShape shape;
  MeshMaterial material;
};

struct BuiltMesh {
  int dim = 3;
  std::vector<double> positions;  // dim components per vertex
  std::vector<double> masses;
  std::vector<PotentialTerm> spring_terms;  // stencils local to this mesh
  std::vector<PotentialTerm> hinge_terms;
  std::vector<std::array<std::size_t, 3>> faces;  // empty for chains

  std::size_t vertex_count() const {
    return dim > 0 ? positions.size() / static_cast<std::size_t>(dim) : 0;
  }
};

// dim must be 3 except for chains, which also build in 2-D. Throws
// ContractError on bad sizes or parameters.
BuiltMesh build_mesh(const MeshBuilderSpec& spec, int dim = 3);

}  // namespace avi
