#pragma once

#include <span>

#include "avi/types.hpp"

namespace avi {

// Elemental energies and their analytic gradients. Gradients are of the
// energy; forces are their negation. Position spans hold dim components
// (2 or 3, except the hinge which is 3-D only). All functions are pure
// and allocation free.

double spring_energy(const SpringParams& p, std::span<const double> xa,
                     std::span<const double> xb);
// Coincident endpoints leave both gradients zero (direction undefined).
void spring_gradient(const SpringParams& p, std::span<const double> xa,
                     std::span<const double> xb, std::span<double> ga,
                     std::span<double> gb);

// Signed dihedral angle in (-pi, pi] between triangles (x0,x1,x2) and
// (x1,x0,x3) sharing edge (x0,x1); zero when the wings are coplanar and
// on opposite sides of the edge. Throws DegenerateGeometryError when
// either triangle's area falls below 1e-12 * |x1-x0|^2.
double hinge_angle(std::span<const double> x0, std::span<const double> x1,
                   std::span<const double> x2, std::span<const double> x3);
double hinge_energy(const HingeParams& p, std::span<const double> x0,
                    std::span<const double> x1, std::span<const double> x2,
                    std::span<const double> x3);
void hinge_gradient(const HingeParams& p, std::span<const double> x0,
                    std::span<const double> x1, std::span<const double> x2,
                    std::span<const double> x3, std::span<double> g0,
                    std::span<double> g1, std::span<double> g2,
                    std::span<double> g3);

double penalty_point_point_energy(const PenaltyPointPointParams& p,
                                  std::span<const double> xa,
                                  std::span<const double> xb);
// Returns false (gradients zeroed) when the points coincide while the
// penalty is active; the caller decides whether to report it.
bool penalty_point_point_gradient(const PenaltyPointPointParams& p,
                                  std::span<const double> xa,
                                  std::span<const double> xb,
                                  std::span<double> ga, std::span<double> gb);

double penalty_point_plane_energy(const PenaltyPointPlaneParams& p,
                                  std::span<const double> x);
void penalty_point_plane_gradient(const PenaltyPointPlaneParams& p,
                                  std::span<const double> x,
                                  std::span<double> g);

double gravity_energy(const GravityParams& p, double mass,
                      std::span<const double> x);
void gravity_gradient(const GravityParams& p, double mass,
                      std::span<double> g);

}  // namespace avi
