#include "avi/potentials.hpp"

#include <cmath>

#include "avi/errors.hpp"

namespace avi {

namespace {

using Vec3 = std::array<double, 3>;

Vec3 load(std::span<const double> x) {
  return {x[0], x[1], x.size() > 2 ? x[2] : 0.0};
}

Vec3 sub(const Vec3& a, const Vec3& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

double dot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}

double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

double distance(std::span<const double> xa, std::span<const double> xb) {
  double r2 = 0.0;
  for (std::size_t c = 0; c < xa.size(); ++c) {
    const double d = xa[c] - xb[c];
    r2 += d * d;
  }
  return std::sqrt(r2);
}

// Shared hinge geometry: edge e = x1 - x0 and the (unnormalized) face
// normals of (x0,x1,x2) and (x1,x0,x3). Both normals are perpendicular
// to e and agree for a flat, opposite-wing configuration.
struct HingeFrame {
  Vec3 e, na, nb;
  double len_e, na2, nb2;
};

HingeFrame hinge_frame(std::span<const double> x0, std::span<const double> x1,
                       std::span<const double> x2,
                       std::span<const double> x3) {
  const Vec3 p0 = load(x0), p1 = load(x1), p2 = load(x2), p3 = load(x3);
  HingeFrame f;
  f.e = sub(p1, p0);
  f.na = cross(f.e, sub(p2, p0));
  f.nb = cross(sub(p0, p1), sub(p3, p1));
  f.len_e = norm(f.e);
  f.na2 = dot(f.na, f.na);
  f.nb2 = dot(f.nb, f.nb);
  const double edge2 = f.len_e * f.len_e;
  // area = |n|/2; reject triangles thinner than 1e-12 * |e|^2.
  const double min_area = 1e-12 * edge2;
  if (f.len_e == 0.0 || 0.5 * std::sqrt(f.na2) < min_area ||
      0.5 * std::sqrt(f.nb2) < min_area) {
    throw DegenerateGeometryError(
        "hinge: triangle area below 1e-12 * edge^2, dihedral undefined");
  }
  return f;
}

double frame_angle(const HingeFrame& f) {
  // atan2 of the sine and cosine of the angle between the normals,
  // signed about the shared edge; stable for every angle in (-pi, pi].
  const double cos_term = dot(f.na, f.nb);
  const double sin_term = dot(cross(f.na, f.nb), f.e) / f.len_e;
  return std::atan2(sin_term, cos_term);
}

}  // namespace

double spring_energy(const SpringParams& p, std::span<const double> xa,
                     std::span<const double> xb) {
  const double s = distance(xa, xb) - p.rest_length;
  return 0.5 * p.stiffness * s * s;
}

void spring_gradient(const SpringParams& p, std::span<const double> xa,
                     std::span<const double> xb, std::span<double> ga,
                     std::span<double> gb) {
  for (std::size_t c = 0; c < xa.size(); ++c) ga[c] = gb[c] = 0.0;
  const double r = distance(xa, xb);
  if (r == 0.0) return;  // direction undefined at coincidence
  const double scale = p.stiffness * (r - p.rest_length) / r;
  for (std::size_t c = 0; c < xa.size(); ++c) {
    const double g = scale * (xa[c] - xb[c]);
    ga[c] = g;
    gb[c] = -g;
  }
}

double hinge_angle(std::span<const double> x0, std::span<const double> x1,
                   std::span<const double> x2, std::span<const double> x3) {
  return frame_angle(hinge_frame(x0, x1, x2, x3));
}

double hinge_energy(const HingeParams& p, std::span<const double> x0,
                    std::span<const double> x1, std::span<const double> x2,
                    std::span<const double> x3) {
  const double d = hinge_angle(x0, x1, x2, x3) - p.rest_angle;
  return 0.5 * p.stiffness * d * d;
}

void hinge_gradient(const HingeParams& p, std::span<const double> x0,
                    std::span<const double> x1, std::span<const double> x2,
                    std::span<const double> x3, std::span<double> g0,
                    std::span<double> g1, std::span<double> g2,
                    std::span<double> g3) {
  const HingeFrame f = hinge_frame(x0, x1, x2, x3);
  const double dtheta = frame_angle(f) - p.rest_angle;
  const double k = p.stiffness * dtheta;

  const Vec3 p0 = load(x0), p1 = load(x1), p2 = load(x2), p3 = load(x3);
  const Vec3 ehat{f.e[0] / f.len_e, f.e[1] / f.len_e, f.e[2] / f.len_e};

  // d(theta)/dx for the four stencil vertices. The wing vertices move
  // only their own normal; the edge vertices mix both, weighted by the
  // wing's projection onto the edge. The four rows sum to zero.
  const Vec3 ga{f.na[0] / f.na2, f.na[1] / f.na2, f.na[2] / f.na2};
  const Vec3 gb{f.nb[0] / f.nb2, f.nb[1] / f.nb2, f.nb[2] / f.nb2};
  const double a1 = dot(sub(p2, p1), ehat);
  const double b1 = dot(sub(p3, p1), ehat);
  const double a0 = dot(sub(p2, p0), ehat);
  const double b0 = dot(sub(p3, p0), ehat);

  for (int c = 0; c < 3; ++c) {
    const double d2 = -f.len_e * ga[c];
    const double d3 = -f.len_e * gb[c];
    const double d0 = -a1 * ga[c] - b1 * gb[c];
    const double d1 = a0 * ga[c] + b0 * gb[c];
    g0[c] = k * d0;
    g1[c] = k * d1;
    g2[c] = k * d2;
    g3[c] = k * d3;
  }
}

double penalty_point_point_energy(const PenaltyPointPointParams& p,
                                  std::span<const double> xa,
                                  std::span<const double> xb) {
  const double gap = p.thickness - distance(xa, xb);
  if (gap <= 0.0) return 0.0;
  return 0.5 * p.stiffness * gap * gap;
}

bool penalty_point_point_gradient(const PenaltyPointPointParams& p,
                                  std::span<const double> xa,
                                  std::span<const double> xb,
                                  std::span<double> ga, std::span<double> gb) {
  for (std::size_t c = 0; c < xa.size(); ++c) ga[c] = gb[c] = 0.0;
  const double r = distance(xa, xb);
  if (r >= p.thickness) return true;
  if (r == 0.0) return false;  // active but directionless
  const double scale = -p.stiffness * (p.thickness - r) / r;
  for (std::size_t c = 0; c < xa.size(); ++c) {
    const double g = scale * (xa[c] - xb[c]);
    ga[c] = g;
    gb[c] = -g;
  }
  return true;
}

double penalty_point_plane_energy(const PenaltyPointPlaneParams& p,
                                  std::span<const double> x) {
  double s = 0.0;
  for (std::size_t c = 0; c < x.size(); ++c) {
    s += (x[c] - p.plane_point[c]) * p.plane_normal[c];
  }
  const double gap = p.thickness - s;
  if (gap <= 0.0) return 0.0;
  return 0.5 * p.stiffness * gap * gap;
}

void penalty_point_plane_gradient(const PenaltyPointPlaneParams& p,
                                  std::span<const double> x,
                                  std::span<double> g) {
  double s = 0.0;
  for (std::size_t c = 0; c < x.size(); ++c) {
    s += (x[c] - p.plane_point[c]) * p.plane_normal[c];
  }
  const double gap = p.thickness - s;
  for (std::size_t c = 0; c < x.size(); ++c) {
    g[c] = gap > 0.0 ? -p.stiffness * gap * p.plane_normal[c] : 0.0;
  }
}

double gravity_energy(const GravityParams& p, double mass,
                      std::span<const double> x) {
  double gx = 0.0;
  for (std::size_t c = 0; c < x.size(); ++c) gx += p.g[c] * x[c];
  return -mass * gx;
}

void gravity_gradient(const GravityParams& p, double mass,
                      std::span<double> g) {
  for (std::size_t c = 0; c < g.size(); ++c) g[c] = -mass * p.g[c];
}

}  // namespace avi
