#include "avi/types.hpp"

#include <cmath>
#include <sstream>
#include <unordered_set>

#include "avi/errors.hpp"

namespace avi {

namespace {

constexpr double kPi = 3.14159265358979323846;

[[noreturn]] void fail(const std::string& msg) { throw ContractError(msg); }

void check_coords(const char* what, int dim,
                  const std::vector<double>& coords) {
  if (dim != 2 && dim != 3) {
    fail(std::string(what) + ": dim must be 2 or 3, got " +
         std::to_string(dim));
  }
  if (coords.size() % static_cast<std::size_t>(dim) != 0) {
    fail(std::string(what) + ": coord count " + std::to_string(coords.size()) +
         " is not a multiple of dim " + std::to_string(dim));
  }
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (!std::isfinite(coords[i])) {
      fail(std::string(what) + ": coord " + std::to_string(i) +
           " is not finite");
    }
  }
}

}  // namespace

PotentialKind kind_of(const PotentialParams& params) {
  switch (params.index()) {
    case 0: return PotentialKind::Spring;
    case 1: return PotentialKind::HingeBend;
    case 2: return PotentialKind::Gravity;
    case 3: return PotentialKind::PenaltyPointPoint;
    default: return PotentialKind::PenaltyPointPlane;
  }
}

std::string_view kind_name(PotentialKind kind) {
  switch (kind) {
    case PotentialKind::Spring: return "spring";
    case PotentialKind::HingeBend: return "hinge_bend";
    case PotentialKind::Gravity: return "gravity";
    case PotentialKind::PenaltyPointPoint: return "penalty_point_point";
    case PotentialKind::PenaltyPointPlane: return "penalty_point_plane";
  }
  return "unknown";
}

std::size_t min_stencil_size(PotentialKind kind) {
  switch (kind) {
    case PotentialKind::Spring: return 2;
    case PotentialKind::HingeBend: return 4;
    case PotentialKind::Gravity: return 1;
    case PotentialKind::PenaltyPointPoint: return 2;
    case PotentialKind::PenaltyPointPlane: return 1;
  }
  return 0;
}

bool has_fixed_stencil_size(PotentialKind kind) {
  return kind != PotentialKind::Gravity;
}

void validate_configuration(const Configuration& q) {
  check_coords("configuration", q.dim, q.coords);
}

void validate_velocity(const Velocity& v) {
  check_coords("velocity", v.dim, v.coords);
}

void validate_mass(const MassModel& mass) {
  for (std::size_t a = 0; a < mass.masses.size(); ++a) {
    const double m = mass.masses[a];
    if (!std::isfinite(m) || m <= 0.0) {
      fail("mass model: mass " + std::to_string(a) + " must be positive and finite");
    }
  }
}

void validate_term(const PotentialTerm& term, std::size_t vertex_count,
                   int dim) {
  const PotentialKind kind = term.kind();
  const std::string label = std::string(kind_name(kind)) + " term";

  if (term.step_ticks < 1) {
    fail(label + ": step_ticks must be >= 1, got " +
         std::to_string(term.step_ticks));
  }

  const std::size_t need = min_stencil_size(kind);
  if (has_fixed_stencil_size(kind)) {
    if (term.stencil.size() != need) {
      fail(label + ": stencil must have exactly " + std::to_string(need) +
           " vertices, got " + std::to_string(term.stencil.size()));
    }
  } else if (term.stencil.size() < need) {
    fail(label + ": stencil must have at least " + std::to_string(need) +
         " vertices, got " + std::to_string(term.stencil.size()));
  }

  std::unordered_set<std::size_t> seen;
  for (std::size_t v : term.stencil) {
    if (v >= vertex_count) {
      fail(label + ": stencil index " + std::to_string(v) +
           " out of range for " + std::to_string(vertex_count) + " vertices");
    }
    if (!seen.insert(v).second) {
      fail(label + ": stencil index " + std::to_string(v) + " repeated");
    }
  }

  auto check_nonneg = [&](const char* name, double x) {
    if (!std::isfinite(x) || x < 0.0) {
      fail(label + ": " + name + " must be finite and >= 0");
    }
  };
  auto check_pos = [&](const char* name, double x) {
    if (!std::isfinite(x) || x <= 0.0) {
      fail(label + ": " + name + " must be finite and > 0");
    }
  };

  switch (kind) {
    case PotentialKind::Spring: {
      const auto& p = std::get<SpringParams>(term.params);
      check_nonneg("stiffness", p.stiffness);
      check_pos("rest_length", p.rest_length);
      break;
    }
    case PotentialKind::HingeBend: {
      const auto& p = std::get<HingeParams>(term.params);
      check_nonneg("stiffness", p.stiffness);
      if (!std::isfinite(p.rest_angle) || p.rest_angle <= -kPi ||
          p.rest_angle >= kPi) {
        fail(label + ": rest_angle must lie in (-pi, pi)");
      }
      if (dim != 3) fail(label + ": requires dim 3");
      break;
    }
    case PotentialKind::Gravity: {
      const auto& p = std::get<GravityParams>(term.params);
      for (double gi : p.g) {
        if (!std::isfinite(gi)) fail(label + ": g must be finite");
      }
      if (dim == 2 && p.g[2] != 0.0) {
        fail(label + ": g[2] must be 0 in a 2-D system");
      }
      break;
    }
    case PotentialKind::PenaltyPointPoint: {
      const auto& p = std::get<PenaltyPointPointParams>(term.params);
      check_nonneg("stiffness", p.stiffness);
      check_pos("thickness", p.thickness);
      break;
    }
    case PotentialKind::PenaltyPointPlane: {
      const auto& p = std::get<PenaltyPointPlaneParams>(term.params);
      check_nonneg("stiffness", p.stiffness);
      check_pos("thickness", p.thickness);
      double n2 = 0.0;
      for (int c = 0; c < 3; ++c) {
        if (!std::isfinite(p.plane_point[c]) ||
            !std::isfinite(p.plane_normal[c])) {
          fail(label + ": plane must be finite");
        }
        n2 += p.plane_normal[c] * p.plane_normal[c];
      }
      if (std::abs(std::sqrt(n2) - 1.0) > 1e-9) {
        fail(label + ": plane_normal must be unit length");
      }
      if (dim == 2 && (p.plane_point[2] != 0.0 || p.plane_normal[2] != 0.0)) {
        fail(label + ": plane components outside the x-y plane in a 2-D system");
      }
      break;
    }
  }
}

void validate_system(const Configuration& q, const Velocity& v,
                     const MassModel& mass,
                     const std::vector<PotentialTerm>& terms) {
  validate_configuration(q);
  validate_velocity(v);
  validate_mass(mass);
  if (v.dim != q.dim) fail("system: velocity dim differs from configuration dim");
  if (v.vertex_count() != q.vertex_count()) {
    fail("system: velocity holds " + std::to_string(v.vertex_count()) +
         " vertices, configuration holds " + std::to_string(q.vertex_count()));
  }
  if (mass.vertex_count() != q.vertex_count()) {
    fail("system: mass model holds " + std::to_string(mass.vertex_count()) +
         " vertices, configuration holds " + std::to_string(q.vertex_count()));
  }
  for (std::size_t i = 0; i < terms.size(); ++i) {
    try {
      validate_term(terms[i], q.vertex_count(), q.dim);
    } catch (const ContractError& e) {
      fail("terms[" + std::to_string(i) + "]: " + e.what());
    }
  }
}

}  // namespace avi
