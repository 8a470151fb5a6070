#include <doctest.h>

#include <cmath>
#include <set>
#include <utility>

#include "avi/energy.hpp"
#include "avi/errors.hpp"
#include "avi/mesh.hpp"
#include "avi/types.hpp"

using namespace avi;

namespace {

double elastic_energy(const BuiltMesh& mesh) {
  Configuration q{mesh.dim, mesh.positions};
  MassModel mass{mesh.masses};
  double e = 0.0;
  for (const auto& t : mesh.spring_terms) e += potential_energy(t, q, mass);
  for (const auto& t : mesh.hinge_terms) e += potential_energy(t, q, mass);
  return e;
}

std::size_t edge_count(const BuiltMesh& mesh) {
  std::set<std::pair<std::size_t, std::size_t>> edges;
  for (const auto& f : mesh.faces) {
    for (int c = 0; c < 3; ++c) {
      std::size_t a = f[static_cast<std::size_t>(c)];
      std::size_t b = f[static_cast<std::size_t>((c + 1) % 3)];
      if (a > b) std::swap(a, b);
      edges.insert({a, b});
    }
  }
  return edges.size();
}

MeshMaterial elastic_material() {
  MeshMaterial m;
  m.vertex_mass = 0.5;
  m.spring_stiffness = 10.0;
  m.hinge_stiffness = 2.0;
  return m;
}

}  // namespace

TEST_CASE("chain meshes: counts, rest lengths, and 2-D support") {
  MeshBuilderSpec spec;
  spec.shape = ChainSpec{5, 0.3};
  spec.material = elastic_material();
  const BuiltMesh mesh = build_mesh(spec);
  CHECK(mesh.vertex_count() == 5);
  CHECK(mesh.spring_terms.size() == 4);
  CHECK(mesh.hinge_terms.empty());
  CHECK(mesh.faces.empty());
  for (const auto& t : mesh.spring_terms) {
    CHECK(std::get<SpringParams>(t.params).rest_length ==
          doctest::Approx(0.3));
  }
  CHECK(std::abs(elastic_energy(mesh)) < 1e-10);

  const BuiltMesh flat = build_mesh(spec, 2);
  CHECK(flat.dim == 2);
  CHECK(flat.vertex_count() == 5);
  CHECK(flat.positions.size() == 10);
}

TEST_CASE("two-vertex chain is a single rest-length spring") {
  MeshBuilderSpec spec;
  spec.shape = ChainSpec{2, 1.0};
  spec.material = elastic_material();
  const BuiltMesh mesh = build_mesh(spec);
  CHECK(mesh.vertex_count() == 2);
  REQUIRE(mesh.spring_terms.size() == 1);
  CHECK(std::abs(elastic_energy(mesh)) < 1e-12);
}

TEST_CASE("2x2 plate: four vertices, four edge springs plus one diagonal") {
  MeshBuilderSpec spec;
  spec.shape = GridPlateSpec{2, 2, 1.0, std::nullopt};
  spec.material = elastic_material();
  const BuiltMesh mesh = build_mesh(spec);
  CHECK(mesh.vertex_count() == 4);
  CHECK(mesh.spring_terms.size() == 5);
  CHECK(mesh.faces.size() == 2);
  CHECK(mesh.hinge_terms.size() == 1);  // the shared diagonal
  CHECK(std::abs(elastic_energy(mesh)) < 1e-10);
}

TEST_CASE("5x5 plate: term counts and boundary pinning") {
  MeshBuilderSpec spec;
  GridPlateSpec g;
  g.nx = 5;
  g.ny = 5;
  g.spacing = 0.175;
  g.boundary_mass = 1e12;
  spec.shape = g;
  spec.material = elastic_material();
  const BuiltMesh mesh = build_mesh(spec);

  CHECK(mesh.vertex_count() == 25);
  CHECK(mesh.spring_terms.size() == 56);  // 40 axis + 16 diagonal
  CHECK(mesh.faces.size() == 32);
  CHECK(mesh.hinge_terms.size() == 40);   // interior edges only
  CHECK(std::abs(elastic_energy(mesh)) < 1e-10);

  // 16 rim vertices pinned, 9 interior at the material mass.
  std::size_t heavy = 0;
  for (double m : mesh.masses) {
    if (m == 1e12) ++heavy;
    else CHECK(m == doctest::Approx(0.5));
  }
  CHECK(heavy == 16);

  // The plate is centered: opposite corners sum to zero.
  const double* first = mesh.positions.data();
  const double* last = mesh.positions.data() + 3 * 24;
  for (int c = 0; c < 3; ++c) {
    CHECK(first[c] + last[c] == doctest::Approx(0.0));
  }
}

TEST_CASE("icosahedron counts satisfy the Euler formula") {
  MeshBuilderSpec spec;
  spec.shape = ShellSphereSpec{0, 1.0, {0, 0, 0}};
  spec.material = elastic_material();
  const BuiltMesh mesh = build_mesh(spec);
  CHECK(mesh.vertex_count() == 12);
  CHECK(mesh.faces.size() == 20);
  CHECK(edge_count(mesh) == 30);
  CHECK(mesh.spring_terms.size() == 30);
  CHECK(mesh.hinge_terms.size() == 30);
  CHECK(12 - 30 + 20 == 2);
}

TEST_CASE("subdivided sphere: counts, radius, and zero build energy") {
  MeshBuilderSpec spec;
  ShellSphereSpec s;
  s.subdivisions = 1;
  s.radius = 0.125;
  s.center = {1.0, -2.0, 0.5};
  spec.shape = s;
  spec.material = elastic_material();
  const BuiltMesh mesh = build_mesh(spec);

  CHECK(mesh.vertex_count() == 42);
  CHECK(mesh.faces.size() == 80);
  CHECK(edge_count(mesh) == 120);
  CHECK(mesh.spring_terms.size() == 120);
  CHECK(mesh.hinge_terms.size() == 120);
  CHECK(static_cast<int>(mesh.vertex_count()) -
            static_cast<int>(edge_count(mesh)) +
            static_cast<int>(mesh.faces.size()) ==
        2);

  for (std::size_t a = 0; a < mesh.vertex_count(); ++a) {
    const double* x = &mesh.positions[3 * a];
    const double r = std::sqrt((x[0] - 1.0) * (x[0] - 1.0) +
                               (x[1] + 2.0) * (x[1] + 2.0) +
                               (x[2] - 0.5) * (x[2] - 0.5));
    CHECK(r == doctest::Approx(0.125).epsilon(1e-12));
  }
  CHECK(std::abs(elastic_energy(mesh)) < 1e-10);
}

TEST_CASE("sphere faces wind outward") {
  MeshBuilderSpec spec;
  spec.shape = ShellSphereSpec{1, 1.0, {0, 0, 0}};
  spec.material = elastic_material();
  const BuiltMesh mesh = build_mesh(spec);
  for (const auto& f : mesh.faces) {
    const double* a = &mesh.positions[3 * f[0]];
    const double* b = &mesh.positions[3 * f[1]];
    const double* c = &mesh.positions[3 * f[2]];
    const double e1[3] = {b[0] - a[0], b[1] - a[1], b[2] - a[2]};
    const double e2[3] = {c[0] - a[0], c[1] - a[1], c[2] - a[2]};
    const double n[3] = {e1[1] * e2[2] - e1[2] * e2[1],
                         e1[2] * e2[0] - e1[0] * e2[2],
                         e1[0] * e2[1] - e1[1] * e2[0]};
    const double centroid[3] = {(a[0] + b[0] + c[0]) / 3,
                                (a[1] + b[1] + c[1]) / 3,
                                (a[2] + b[2] + c[2]) / 3};
    CHECK(n[0] * centroid[0] + n[1] * centroid[1] + n[2] * centroid[2] > 0.0);
  }
}

TEST_CASE("generated terms carry the material time steps and stiffnesses") {
  MeshBuilderSpec spec;
  spec.shape = GridPlateSpec{3, 3, 1.0, std::nullopt};
  MeshMaterial m = elastic_material();
  m.spring_step_ticks = 4;
  m.hinge_step_ticks = 6;
  spec.material = m;
  const BuiltMesh mesh = build_mesh(spec);
  for (const auto& t : mesh.spring_terms) {
    CHECK(t.step_ticks == 4);
    CHECK(std::get<SpringParams>(t.params).stiffness == 10.0);
  }
  for (const auto& t : mesh.hinge_terms) {
    CHECK(t.step_ticks == 6);
    CHECK(std::get<HingeParams>(t.params).stiffness == 2.0);
  }
}

TEST_CASE("hinge stencils join the two triangles across each interior edge") {
  MeshBuilderSpec spec;
  spec.shape = GridPlateSpec{3, 3, 1.0, std::nullopt};
  spec.material = elastic_material();
  const BuiltMesh mesh = build_mesh(spec);

  std::set<std::pair<std::size_t, std::size_t>> face_edges;
  for (const auto& f : mesh.faces) {
    for (int c = 0; c < 3; ++c) {
      std::size_t a = f[static_cast<std::size_t>(c)];
      std::size_t b = f[static_cast<std::size_t>((c + 1) % 3)];
      if (a > b) std::swap(a, b);
      face_edges.insert({a, b});
    }
  }
  for (const auto& t : mesh.hinge_terms) {
    REQUIRE(t.stencil.size() == 4);
    std::size_t a = t.stencil[0], b = t.stencil[1];
    if (a > b) std::swap(a, b);
    CHECK(face_edges.count({a, b}) == 1);
    CHECK(t.stencil[2] != t.stencil[3]);
  }
}

TEST_CASE("builder rejects invalid specs") {
  MeshMaterial m = elastic_material();

  MeshBuilderSpec bad_spacing;
  bad_spacing.shape = ChainSpec{3, 0.0};
  bad_spacing.material = m;
  CHECK_THROWS_AS(build_mesh(bad_spacing), ContractError);

  MeshBuilderSpec bad_mass;
  bad_mass.shape = ChainSpec{3, 1.0};
  bad_mass.material = m;
  bad_mass.material.vertex_mass = 0.0;
  CHECK_THROWS_AS(build_mesh(bad_mass), ContractError);

  MeshBuilderSpec plate2d;
  plate2d.shape = GridPlateSpec{2, 2, 1.0, std::nullopt};
  plate2d.material = m;
  CHECK_THROWS_AS(build_mesh(plate2d, 2), ContractError);

  MeshBuilderSpec deep;
  deep.shape = ShellSphereSpec{8, 1.0, {0, 0, 0}};
  deep.material = m;
  CHECK_THROWS_AS(build_mesh(deep), ContractError);
}

TEST_CASE("built meshes validate as systems") {
  MeshBuilderSpec spec;
  spec.shape = ShellSphereSpec{1, 0.5, {0, 0, 0}};
  spec.material = elastic_material();
  const BuiltMesh mesh = build_mesh(spec);

  Configuration q{mesh.dim, mesh.positions};
  Velocity v{mesh.dim, std::vector<double>(mesh.positions.size(), 0.0)};
  MassModel mass{mesh.masses};
  std::vector<PotentialTerm> terms = mesh.spring_terms;
  terms.insert(terms.end(), mesh.hinge_terms.begin(), mesh.hinge_terms.end());
  CHECK_NOTHROW(validate_system(q, v, mass, terms));
}
