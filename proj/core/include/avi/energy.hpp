#pragma once

#include <array>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "avi/types.hpp"

namespace avi {

// Receives non-fatal evaluation notes (degenerate penalty geometry).
using WarningSink = std::function<void(const std::string&)>;

double kinetic_energy(const MassModel& mass, const Velocity& v);

// Energy of a single term at configuration q. The mass model is needed
// by mass-coupled kinds (gravity) and ignored by the rest.
double potential_energy(const PotentialTerm& term, const Configuration& q,
                        const MassModel& mass);

// Gradient of the term's energy restricted to its stencil, laid out as
// stencil.size() consecutive blocks of q.dim components. Entries for
// vertices outside the stencil are identically zero and not stored.
std::vector<double> potential_gradient(const PotentialTerm& term,
                                       const Configuration& q,
                                       const MassModel& mass,
                                       const WarningSink* warn = nullptr);

// out += weight * dV/dq scattered to the term's stencil; out spans the
// whole configuration (q.coords.size() entries).
void accumulate_potential_gradient(const PotentialTerm& term,
                                   const Configuration& q,
                                   const MassModel& mass, double weight,
                                   std::span<double> out,
                                   const WarningSink* warn = nullptr);

// Kinetic plus the sum of every term's potential energy.
double total_energy(const SystemState& state, const MassModel& mass,
                    const std::vector<PotentialTerm>& terms);

std::array<double, 3> linear_momentum(const MassModel& mass,
                                      const Velocity& v);

// About the origin. 2-D states report the scalar moment in the z slot.
std::array<double, 3> angular_momentum(const MassModel& mass,
                                       const Configuration& q,
                                       const Velocity& v);

}  // namespace avi
