#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>
#include <variant>
#include <vector>

namespace avi {

// Discrete time coordinate. All event times live on an integer tick
// lattice; wall-clock time is tick * tick_duration.
using Tick = std::int64_t;

// Flat storage of vertex positions: vertex a owns components
// [a*dim, a*dim + dim). dim is 2 or 3.
struct Configuration {
  int dim = 3;
  std::vector<double> coords;

  std::size_t vertex_count() const {
    return dim > 0 ? coords.size() / static_cast<std::size_t>(dim) : 0;
  }
  double* vertex(std::size_t a) {
    return coords.data() + a * static_cast<std::size_t>(dim);
  }
  const double* vertex(std::size_t a) const {
    return coords.data() + a * static_cast<std::size_t>(dim);
  }
  bool operator==(const Configuration&) const = default;
};

// Same layout as Configuration, one velocity per vertex.
struct Velocity {
  int dim = 3;
  std::vector<double> coords;

  std::size_t vertex_count() const {
    return dim > 0 ? coords.size() / static_cast<std::size_t>(dim) : 0;
  }
  double* vertex(std::size_t a) {
    return coords.data() + a * static_cast<std::size_t>(dim);
  }
  const double* vertex(std::size_t a) const {
    return coords.data() + a * static_cast<std::size_t>(dim);
  }
  bool operator==(const Velocity&) const = default;
};

// Lumped (diagonal) masses, one positive scalar per vertex.
struct MassModel {
  std::vector<double> masses;

  std::size_t vertex_count() const { return masses.size(); }
  bool operator==(const MassModel&) const = default;
};

enum class PotentialKind {
  Spring,
  HingeBend,
  Gravity,
  PenaltyPointPoint,
  PenaltyPointPlane,
};

// E = 1/2 k (|xa - xb| - L)^2, stencil (a, b).
struct SpringParams {
  double stiffness = 0.0;    // k >= 0
  double rest_length = 1.0;  // L > 0
  bool operator==(const SpringParams&) const = default;
};

// E = 1/2 k (theta - rest_angle)^2, theta the signed dihedral between
// triangles (x0,x1,x2) and (x1,x0,x3) sharing edge (x0,x1). 3-D only.
struct HingeParams {
  double stiffness = 0.0;   // k >= 0
  double rest_angle = 0.0;  // in (-pi, pi)
  bool operator==(const HingeParams&) const = default;
};

// E = -sum_a m_a g . x_a over the stencil. In 2-D g[2] must be 0.
struct GravityParams {
  std::array<double, 3> g{0.0, 0.0, 0.0};
  bool operator==(const GravityParams&) const = default;
};

// E = 1/2 k max(0, eta - |xa - xb|)^2, stencil (a, b).
struct PenaltyPointPointParams {
  double stiffness = 0.0;  // k >= 0
  double thickness = 1.0;  // eta > 0
  bool operator==(const PenaltyPointPointParams&) const = default;
};

// E = 1/2 k max(0, eta - s)^2 with s = (x - p) . n, unit n; stencil (a).
// In 2-D the third components of p and n must be 0.
struct PenaltyPointPlaneParams {
  double stiffness = 0.0;  // k >= 0
  double thickness = 1.0;  // eta > 0
  std::array<double, 3> plane_point{0.0, 0.0, 0.0};
  std::array<double, 3> plane_normal{0.0, 0.0, 1.0};
  bool operator==(const PenaltyPointPlaneParams&) const = default;
};

using PotentialParams = std::variant<SpringParams, HingeParams, GravityParams,
                                     PenaltyPointPointParams,
                                     PenaltyPointPlaneParams>;

PotentialKind kind_of(const PotentialParams& params);
std::string_view kind_name(PotentialKind kind);

// How many vertices a term of this kind couples. Gravity accepts any
// stencil of at least one vertex; the others are fixed-size.
std::size_t min_stencil_size(PotentialKind kind);
bool has_fixed_stencil_size(PotentialKind kind);

// One interaction potential plus its elemental time step. Forces from
// this term touch exactly the stencil vertices and no others.
struct PotentialTerm {
  std::vector<std::size_t> stencil;  // distinct vertex indices
  Tick step_ticks = 1;               // elemental step, >= 1
  PotentialParams params;

  PotentialKind kind() const { return kind_of(params); }
  bool operator==(const PotentialTerm&) const = default;
};

// Full dynamic state on the tick lattice. The wall-clock time of the
// state is exactly tick * tick_duration.
struct SystemState {
  Configuration q;
  Velocity v;
  Tick tick = 0;
  double tick_duration = 1.0;

  double time() const { return static_cast<double>(tick) * tick_duration; }
};

// Validation helpers. All throw ContractError with a message naming the
// offending entry.
void validate_configuration(const Configuration& q);
void validate_velocity(const Velocity& v);
void validate_mass(const MassModel& mass);
void validate_term(const PotentialTerm& term, std::size_t vertex_count,
                   int dim);
void validate_system(const Configuration& q, const Velocity& v,
                     const MassModel& mass,
                     const std::vector<PotentialTerm>& terms);

}  // namespace avi
