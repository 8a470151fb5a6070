#include "avi/energy.hpp"

#include <cmath>

#include "avi/errors.hpp"
#include "avi/potentials.hpp"

namespace avi {

namespace {

std::span<const double> vertex_span(const Configuration& q, std::size_t a) {
  return {q.vertex(a), static_cast<std::size_t>(q.dim)};
}

void check_stencil(const PotentialTerm& term, const Configuration& q) {
  for (std::size_t a : term.stencil) {
    if (a >= q.vertex_count()) {
      throw ContractError(std::string(kind_name(term.kind())) +
                          " term: stencil index " + std::to_string(a) +
                          " out of range for " +
                          std::to_string(q.vertex_count()) + " vertices");
    }
  }
}

// Stencil-local gradient into grad (stencil.size() blocks of dim).
// Returns false when a point-point penalty is active at coincidence.
bool eval_gradient(const PotentialTerm& term, const Configuration& q,
                   const MassModel& mass, std::span<double> grad) {
  const std::size_t dim = static_cast<std::size_t>(q.dim);
  auto block = [&](std::size_t i) {
    return grad.subspan(i * dim, dim);
  };
  switch (term.kind()) {
    case PotentialKind::Spring:
      spring_gradient(std::get<SpringParams>(term.params),
                      vertex_span(q, term.stencil[0]),
                      vertex_span(q, term.stencil[1]), block(0), block(1));
      return true;
    case PotentialKind::HingeBend:
      if (q.dim != 3) {
        throw ContractError("hinge_bend term: requires dim 3");
      }
      hinge_gradient(std::get<HingeParams>(term.params),
                     vertex_span(q, term.stencil[0]),
                     vertex_span(q, term.stencil[1]),
                     vertex_span(q, term.stencil[2]),
                     vertex_span(q, term.stencil[3]), block(0), block(1),
                     block(2), block(3));
      return true;
    case PotentialKind::Gravity: {
      const auto& p = std::get<GravityParams>(term.params);
      if (mass.vertex_count() != q.vertex_count()) {
        throw ContractError("gravity term: mass model size differs from configuration");
      }
      for (std::size_t i = 0; i < term.stencil.size(); ++i) {
        gravity_gradient(p, mass.masses[term.stencil[i]], block(i));
      }
      return true;
    }
    case PotentialKind::PenaltyPointPoint:
      return penalty_point_point_gradient(
          std::get<PenaltyPointPointParams>(term.params),
          vertex_span(q, term.stencil[0]), vertex_span(q, term.stencil[1]),
          block(0), block(1));
    case PotentialKind::PenaltyPointPlane:
      penalty_point_plane_gradient(
          std::get<PenaltyPointPlaneParams>(term.params),
          vertex_span(q, term.stencil[0]), block(0));
      return true;
  }
  return true;
}

}  // namespace

double kinetic_energy(const MassModel& mass, const Velocity& v) {
  const std::size_t dim = static_cast<std::size_t>(v.dim);
  if (v.coords.size() != mass.masses.size() * dim) {
    throw ContractError("kinetic_energy: velocity holds " +
                        std::to_string(v.vertex_count()) +
                        " vertices, mass model holds " +
                        std::to_string(mass.vertex_count()));
  }
  double e = 0.0;
  for (std::size_t a = 0; a < mass.masses.size(); ++a) {
    double v2 = 0.0;
    for (std::size_t c = 0; c < dim; ++c) {
      const double vc = v.coords[a * dim + c];
      v2 += vc * vc;
    }
    e += 0.5 * mass.masses[a] * v2;
  }
  return e;
}

double potential_energy(const PotentialTerm& term, const Configuration& q,
                        const MassModel& mass) {
  check_stencil(term, q);
  switch (term.kind()) {
    case PotentialKind::Spring:
      return spring_energy(std::get<SpringParams>(term.params),
                           vertex_span(q, term.stencil[0]),
                           vertex_span(q, term.stencil[1]));
    case PotentialKind::HingeBend:
      if (q.dim != 3) {
        throw ContractError("hinge_bend term: requires dim 3");
      }
      return hinge_energy(std::get<HingeParams>(term.params),
                          vertex_span(q, term.stencil[0]),
                          vertex_span(q, term.stencil[1]),
                          vertex_span(q, term.stencil[2]),
                          vertex_span(q, term.stencil[3]));
    case PotentialKind::Gravity: {
      const auto& p = std::get<GravityParams>(term.params);
      if (mass.vertex_count() != q.vertex_count()) {
        throw ContractError("gravity term: mass model size differs from configuration");
      }
      double e = 0.0;
      for (std::size_t a : term.stencil) {
        e += gravity_energy(p, mass.masses[a], vertex_span(q, a));
      }
      return e;
    }
    case PotentialKind::PenaltyPointPoint:
      return penalty_point_point_energy(
          std::get<PenaltyPointPointParams>(term.params),
          vertex_span(q, term.stencil[0]), vertex_span(q, term.stencil[1]));
    case PotentialKind::PenaltyPointPlane:
      return penalty_point_plane_energy(
          std::get<PenaltyPointPlaneParams>(term.params),
          vertex_span(q, term.stencil[0]));
  }
  return 0.0;
}

std::vector<double> potential_gradient(const PotentialTerm& term,
                                       const Configuration& q,
                                       const MassModel& mass,
                                       const WarningSink* warn) {
  check_stencil(term, q);
  std::vector<double> grad(term.stencil.size() *
                           static_cast<std::size_t>(q.dim));
  if (!eval_gradient(term, q, mass, grad) && warn && *warn) {
    (*warn)("degenerate geometry: point-point penalty endpoints coincide, gradient zeroed");
  }
  return grad;
}

void accumulate_potential_gradient(const PotentialTerm& term,
                                   const Configuration& q,
                                   const MassModel& mass, double weight,
                                   std::span<double> out,
                                   const WarningSink* warn) {
  check_stencil(term, q);
  if (out.size() != q.coords.size()) {
    throw ContractError("accumulate_potential_gradient: output size differs from configuration");
  }
  const std::size_t dim = static_cast<std::size_t>(q.dim);
  if (term.kind() == PotentialKind::Gravity) {
    // Unbounded stencil; scatter without a local buffer.
    if (mass.vertex_count() != q.vertex_count()) {
      throw ContractError("gravity term: mass model size differs from configuration");
    }
    const auto& p = std::get<GravityParams>(term.params);
    for (std::size_t a : term.stencil) {
      const std::size_t base = a * dim;
      for (std::size_t c = 0; c < dim; ++c) {
        out[base + c] += weight * (-mass.masses[a] * p.g[c]);
      }
    }
    return;
  }
  double local[12];  // largest fixed stencil is 4 vertices in 3-D
  const std::size_t need = term.stencil.size() * dim;
  std::span<double> grad(local, need);
  if (!eval_gradient(term, q, mass, grad) && warn && *warn) {
    (*warn)("degenerate geometry: point-point penalty endpoints coincide, gradient zeroed");
  }
  for (std::size_t i = 0; i < term.stencil.size(); ++i) {
    const std::size_t base = term.stencil[i] * dim;
    for (std::size_t c = 0; c < dim; ++c) {
      out[base + c] += weight * grad[i * dim + c];
    }
  }
}

double total_energy(const SystemState& state, const MassModel& mass,
                    const std::vector<PotentialTerm>& terms) {
  double e = kinetic_energy(mass, state.v);
  for (const PotentialTerm& term : terms) {
    e += potential_energy(term, state.q, mass);
  }
  return e;
}

std::array<double, 3> linear_momentum(const MassModel& mass,
                                      const Velocity& v) {
  const std::size_t dim = static_cast<std::size_t>(v.dim);
  if (v.coords.size() != mass.masses.size() * dim) {
    throw ContractError("linear_momentum: velocity size differs from mass model");
  }
  std::array<double, 3> p{0.0, 0.0, 0.0};
  for (std::size_t a = 0; a < mass.masses.size(); ++a) {
    for (std::size_t c = 0; c < dim; ++c) {
      p[c] += mass.masses[a] * v.coords[a * dim + c];
    }
  }
  return p;
}

std::array<double, 3> angular_momentum(const MassModel& mass,
                                       const Configuration& q,
                                       const Velocity& v) {
  const std::size_t dim = static_cast<std::size_t>(q.dim);
  if (v.dim != q.dim || v.coords.size() != q.coords.size() ||
      q.coords.size() != mass.masses.size() * dim) {
    throw ContractError("angular_momentum: inconsistent state sizes");
  }
  std::array<double, 3> l{0.0, 0.0, 0.0};
  for (std::size_t a = 0; a < mass.masses.size(); ++a) {
    const double* x = q.vertex(a);
    const double* u = v.vertex(a);
    const double m = mass.masses[a];
    if (dim == 2) {
      l[2] += m * (x[0] * u[1] - x[1] * u[0]);
    } else {
      l[0] += m * (x[1] * u[2] - x[2] * u[1]);
      l[1] += m * (x[2] * u[0] - x[0] * u[2]);
      l[2] += m * (x[0] * u[1] - x[1] * u[0]);
    }
  }
  return l;
}

}  // namespace avi
