#include "avi/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>

#include "avi/errors.hpp"
#include "avi/potentials.hpp"

namespace avi {

namespace {

std::span<const double> vat(const BuiltMesh& mesh, std::size_t a) {
  return {mesh.positions.data() + a * static_cast<std::size_t>(mesh.dim),
          static_cast<std::size_t>(mesh.dim)};
}

double edge_length(const BuiltMesh& mesh, std::size_t a, std::size_t b) {
  auto xa = vat(mesh, a);
  auto xb = vat(mesh, b);
  double r2 = 0.0;
  for (std::size_t c = 0; c < xa.size(); ++c) {
    const double d = xa[c] - xb[c];
    r2 += d * d;
  }
  return std::sqrt(r2);
}

void add_spring(BuiltMesh& mesh, const MeshMaterial& mat, std::size_t a,
                std::size_t b) {
  PotentialTerm term;
  term.stencil = {a, b};
  term.step_ticks = mat.spring_step_ticks;
  term.params = SpringParams{mat.spring_stiffness, edge_length(mesh, a, b)};
  mesh.spring_terms.push_back(std::move(term));
}

// One spring per undirected face edge, in first-appearance order.
void springs_from_faces(BuiltMesh& mesh, const MeshMaterial& mat) {
  std::map<std::pair<std::size_t, std::size_t>, bool> seen;
  for (const auto& f : mesh.faces) {
    for (int k = 0; k < 3; ++k) {
      std::size_t a = f[k], b = f[(k + 1) % 3];
      if (a > b) std::swap(a, b);
      if (seen.emplace(std::make_pair(a, b), true).second) {
        add_spring(mesh, mat, a, b);
      }
    }
  }
}

// A hinge per interior edge. With consistent winding each interior edge
// appears once as (a,b) and once as (b,a); the stencil is
// (a, b, opposite(a,b), opposite(b,a)) so the hinge's two triangles are
// exactly the adjacent faces.
void hinges_from_faces(BuiltMesh& mesh, const MeshMaterial& mat) {
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> opposite;
  for (const auto& f : mesh.faces) {
    for (int k = 0; k < 3; ++k) {
      opposite[{f[k], f[(k + 1) % 3]}] = f[(k + 2) % 3];
    }
  }
  for (const auto& f : mesh.faces) {
    for (int k = 0; k < 3; ++k) {
      const std::size_t a = f[k], b = f[(k + 1) % 3];
      if (a > b) continue;  // visit each undirected edge once
      const auto rev = opposite.find({b, a});
      if (rev == opposite.end()) continue;  // boundary edge
      PotentialTerm term;
      term.stencil = {a, b, opposite[{a, b}], rev->second};
      term.step_ticks = mat.hinge_step_ticks;
      const double rest =
          hinge_angle(vat(mesh, a), vat(mesh, b),
                      vat(mesh, term.stencil[2]), vat(mesh, term.stencil[3]));
      term.params = HingeParams{mat.hinge_stiffness, rest};
      mesh.hinge_terms.push_back(std::move(term));
    }
  }
}

void check_material(const MeshMaterial& mat) {
  if (!std::isfinite(mat.vertex_mass) || mat.vertex_mass <= 0.0) {
    throw ContractError("mesh material: vertex_mass must be positive");
  }
  if (!std::isfinite(mat.spring_stiffness) || mat.spring_stiffness < 0.0 ||
      !std::isfinite(mat.hinge_stiffness) || mat.hinge_stiffness < 0.0) {
    throw ContractError("mesh material: stiffness must be finite and >= 0");
  }
  if (mat.spring_step_ticks < 1 || mat.hinge_step_ticks < 1) {
    throw ContractError("mesh material: step_ticks must be >= 1");
  }
}

BuiltMesh build_chain(const ChainSpec& spec, const MeshMaterial& mat,
                      int dim) {
  if (spec.count < 1) {
    throw ContractError("chain: count must be >= 1");
  }
  if (!std::isfinite(spec.spacing) || spec.spacing <= 0.0) {
    throw ContractError("chain: spacing must be positive");
  }
  BuiltMesh mesh;
  mesh.dim = dim;
  mesh.positions.assign(spec.count * static_cast<std::size_t>(dim), 0.0);
  for (std::size_t i = 0; i < spec.count; ++i) {
    mesh.positions[i * static_cast<std::size_t>(dim)] =
        static_cast<double>(i) * spec.spacing;
  }
  mesh.masses.assign(spec.count, mat.vertex_mass);
  for (std::size_t i = 0; i + 1 < spec.count; ++i) {
    add_spring(mesh, mat, i, i + 1);
  }
  return mesh;
}

BuiltMesh build_grid_plate(const GridPlateSpec& spec, const MeshMaterial& mat) {
  if (spec.nx < 1 || spec.ny < 1) {
    throw ContractError("grid_plate: nx and ny must be >= 1");
  }
  if (!std::isfinite(spec.spacing) || spec.spacing <= 0.0) {
    throw ContractError("grid_plate: spacing must be positive");
  }
  if (spec.boundary_mass &&
      (!std::isfinite(*spec.boundary_mass) || *spec.boundary_mass <= 0.0)) {
    throw ContractError("grid_plate: boundary_mass must be positive");
  }

  BuiltMesh mesh;
  mesh.dim = 3;
  const std::size_t n = spec.nx * spec.ny;
  mesh.positions.assign(n * 3, 0.0);
  mesh.masses.assign(n, mat.vertex_mass);
  const double cx = 0.5 * static_cast<double>(spec.nx - 1) * spec.spacing;
  const double cy = 0.5 * static_cast<double>(spec.ny - 1) * spec.spacing;

  auto id = [&](std::size_t i, std::size_t j) { return j * spec.nx + i; };
  for (std::size_t j = 0; j < spec.ny; ++j) {
    for (std::size_t i = 0; i < spec.nx; ++i) {
      double* x = mesh.positions.data() + id(i, j) * 3;
      x[0] = static_cast<double>(i) * spec.spacing - cx;
      x[1] = static_cast<double>(j) * spec.spacing - cy;
      x[2] = 0.0;
      const bool rim =
          i == 0 || j == 0 || i == spec.nx - 1 || j == spec.ny - 1;
      if (rim && spec.boundary_mass) {
        mesh.masses[id(i, j)] = *spec.boundary_mass;
      }
    }
  }

  // axis-aligned springs plus one diagonal per cell
  for (std::size_t j = 0; j < spec.ny; ++j) {
    for (std::size_t i = 0; i < spec.nx; ++i) {
      if (i + 1 < spec.nx) add_spring(mesh, mat, id(i, j), id(i + 1, j));
      if (j + 1 < spec.ny) add_spring(mesh, mat, id(i, j), id(i, j + 1));
      if (i + 1 < spec.nx && j + 1 < spec.ny) {
        add_spring(mesh, mat, id(i, j), id(i + 1, j + 1));
      }
    }
  }

  // two triangles per cell, wound counterclockwise seen from +z
  for (std::size_t j = 0; j + 1 < spec.ny; ++j) {
    for (std::size_t i = 0; i + 1 < spec.nx; ++i) {
      mesh.faces.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      mesh.faces.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }

  hinges_from_faces(mesh, mat);
  return mesh;
}

BuiltMesh build_shell_sphere(const ShellSphereSpec& spec,
                             const MeshMaterial& mat) {
  if (spec.subdivisions > 7) {
    throw ContractError("shell_sphere: subdivisions must be <= 7");
  }
  if (!std::isfinite(spec.radius) || spec.radius <= 0.0) {
    throw ContractError("shell_sphere: radius must be positive");
  }
  for (double c : spec.center) {
    if (!std::isfinite(c)) {
      throw ContractError("shell_sphere: center must be finite");
    }
  }

  // Unit icosahedron, vertices normalized below.
  const double p = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<std::array<double, 3>> verts = {
      {-1, p, 0}, {1, p, 0},   {-1, -p, 0}, {1, -p, 0},
      {0, -1, p}, {0, 1, p},   {0, -1, -p}, {0, 1, -p},
      {p, 0, -1}, {p, 0, 1},   {-p, 0, -1}, {-p, 0, 1}};
  std::vector<std::array<std::size_t, 3>> faces = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
      {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
      {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
      {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};

  auto normalize = [](std::array<double, 3>& v) {
    const double r = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    v = {v[0] / r, v[1] / r, v[2] / r};
  };
  for (auto& v : verts) normalize(v);

  // Enforce outward winding regardless of the table above.
  for (auto& f : faces) {
    const auto &a = verts[f[0]], &b = verts[f[1]], &c = verts[f[2]];
    const double ux = b[0] - a[0], uy = b[1] - a[1], uz = b[2] - a[2];
    const double vx = c[0] - a[0], vy = c[1] - a[1], vz = c[2] - a[2];
    const double nx = uy * vz - uz * vy;
    const double ny = uz * vx - ux * vz;
    const double nz = ux * vy - uy * vx;
    const double outward = nx * (a[0] + b[0] + c[0]) +
                           ny * (a[1] + b[1] + c[1]) +
                           nz * (a[2] + b[2] + c[2]);
    if (outward < 0.0) std::swap(f[1], f[2]);
  }

  for (unsigned level = 0; level < spec.subdivisions; ++level) {
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> midpoint;
    auto mid = [&](std::size_t a, std::size_t b) {
      const auto key = std::minmax(a, b);
      const auto it = midpoint.find({key.first, key.second});
      if (it != midpoint.end()) return it->second;
      std::array<double, 3> m = {(verts[a][0] + verts[b][0]) / 2.0,
                                 (verts[a][1] + verts[b][1]) / 2.0,
                                 (verts[a][2] + verts[b][2]) / 2.0};
      normalize(m);
      verts.push_back(m);
      const std::size_t idx = verts.size() - 1;
      midpoint[{key.first, key.second}] = idx;
      return idx;
    };

    std::vector<std::array<std::size_t, 3>> next;
    next.reserve(faces.size() * 4);
    for (const auto& f : faces) {
      const std::size_t ab = mid(f[0], f[1]);
      const std::size_t bc = mid(f[1], f[2]);
      const std::size_t ca = mid(f[2], f[0]);
      next.push_back({f[0], ab, ca});
      next.push_back({f[1], bc, ab});
      next.push_back({f[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    faces = std::move(next);
  }

  BuiltMesh mesh;
  mesh.dim = 3;
  mesh.positions.reserve(verts.size() * 3);
  for (const auto& v : verts) {
    for (int c = 0; c < 3; ++c) {
      mesh.positions.push_back(spec.center[c] + spec.radius * v[c]);
    }
  }
  mesh.masses.assign(verts.size(), mat.vertex_mass);
  mesh.faces = std::move(faces);

  springs_from_faces(mesh, mat);
  hinges_from_faces(mesh, mat);
  return mesh;
}

}  // namespace

BuiltMesh build_mesh(const MeshBuilderSpec& spec, int dim) {
  if (dim != 2 && dim != 3) {
    throw ContractError("build_mesh: dim must be 2 or 3");
  }
  check_material(spec.material);
  if (std::holds_alternative<ChainSpec>(spec.shape)) {
    return build_chain(std::get<ChainSpec>(spec.shape), spec.material, dim);
  }
  if (dim != 3) {
    throw ContractError("build_mesh: plates and shells require dim 3");
  }
  if (std::holds_alternative<GridPlateSpec>(spec.shape)) {
    return build_grid_plate(std::get<GridPlateSpec>(spec.shape),
                            spec.material);
  }
  return build_shell_sphere(std::get<ShellSphereSpec>(spec.shape),
                            spec.material);
}

}  // namespace avi
