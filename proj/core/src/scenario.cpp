#include "avi/scenario.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "avi/errors.hpp"
#include "avi/mesh.hpp"

namespace avi {

namespace {

using nlohmann::json;

[[noreturn]] void fail_field(const std::string& path, const std::string& msg) {
  throw ScenarioError("field '" + path + "': " + msg);
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string at(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

void check_object(const json& j, const std::string& path,
                  std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail_field(path, "must be an object");
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        ok = true;
        break;
      }
    }
    if (!ok) fail_field(join(path, item.key()), "unknown field");
  }
}

const json* find(const json& obj, const char* key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

const json& require(const json& obj, const char* key,
                    const std::string& path) {
  const json* j = find(obj, key);
  if (!j) fail_field(join(path, key), "missing required field");
  return *j;
}

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail_field(path, "must be a number");
  return j.get<double>();
}

double get_positive(const json& j, const std::string& path) {
  const double x = get_number(j, path);
  if (!std::isfinite(x) || x <= 0.0) fail_field(path, "must be > 0");
  return x;
}

double get_nonnegative(const json& j, const std::string& path) {
  const double x = get_number(j, path);
  if (!std::isfinite(x) || x < 0.0) fail_field(path, "must be >= 0");
  return x;
}

Tick get_integer(const json& j, const std::string& path) {
  if (j.is_number_integer() || j.is_number_unsigned()) {
    return j.get<Tick>();
  }
  fail_field(path, "must be an integer");
}

Tick get_ticks(const json& j, const std::string& path) {
  const Tick t = get_integer(j, path);
  if (t < 1) fail_field(path, "must be >= 1");
  return t;
}

std::size_t get_index(const json& j, const std::string& path) {
  const Tick t = get_integer(j, path);
  if (t < 0) fail_field(path, "must be >= 0");
  return static_cast<std::size_t>(t);
}

std::array<double, 3> get_vec(const json& j, int dim,
                              const std::string& path) {
  if (!j.is_array() || j.size() != static_cast<std::size_t>(dim)) {
    fail_field(path, "must be an array of " + std::to_string(dim) +
                         " numbers");
  }
  std::array<double, 3> v{0.0, 0.0, 0.0};
  for (int c = 0; c < dim; ++c) {
    v[static_cast<std::size_t>(c)] =
        get_number(j[static_cast<std::size_t>(c)], at(path, c));
    if (!std::isfinite(v[static_cast<std::size_t>(c)])) {
      fail_field(at(path, c), "must be finite");
    }
  }
  return v;
}

PotentialTerm parse_term(const json& j, int dim, const std::string& path) {
  check_object(j, path, {"kind", "stencil", "step_ticks", "params"});
  const json& jkind = require(j, "kind", path);
  if (!jkind.is_string()) fail_field(join(path, "kind"), "must be a string");
  const std::string kind = jkind.get<std::string>();

  PotentialTerm term;
  const json& jst = require(j, "stencil", path);
  if (!jst.is_array() || jst.empty()) {
    fail_field(join(path, "stencil"), "must be a non-empty array of indices");
  }
  for (std::size_t i = 0; i < jst.size(); ++i) {
    term.stencil.push_back(get_index(jst[i], at(join(path, "stencil"), i)));
  }
  term.step_ticks = get_ticks(require(j, "step_ticks", path),
                              join(path, "step_ticks"));

  const json& jp = require(j, "params", path);
  const std::string ppath = join(path, "params");
  if (kind == "spring") {
    check_object(jp, ppath, {"stiffness", "rest_length"});
    term.params = SpringParams{
        get_nonnegative(require(jp, "stiffness", ppath),
                        join(ppath, "stiffness")),
        get_positive(require(jp, "rest_length", ppath),
                     join(ppath, "rest_length"))};
  } else if (kind == "hinge_bend") {
    check_object(jp, ppath, {"stiffness", "rest_angle"});
    HingeParams p;
    p.stiffness = get_nonnegative(require(jp, "stiffness", ppath),
                                  join(ppath, "stiffness"));
    p.rest_angle = get_number(require(jp, "rest_angle", ppath),
                              join(ppath, "rest_angle"));
    term.params = p;
  } else if (kind == "gravity") {
    check_object(jp, ppath, {"g"});
    GravityParams p;
    p.g = get_vec(require(jp, "g", ppath), dim, join(ppath, "g"));
    term.params = p;
  } else if (kind == "penalty_point_point") {
    check_object(jp, ppath, {"stiffness", "thickness"});
    term.params = PenaltyPointPointParams{
        get_nonnegative(require(jp, "stiffness", ppath),
                        join(ppath, "stiffness")),
        get_positive(require(jp, "thickness", ppath),
                     join(ppath, "thickness"))};
  } else if (kind == "penalty_point_plane") {
    check_object(jp, ppath,
                 {"stiffness", "thickness", "plane_point", "plane_normal"});
    PenaltyPointPlaneParams p;
    p.stiffness = get_nonnegative(require(jp, "stiffness", ppath),
                                  join(ppath, "stiffness"));
    p.thickness = get_positive(require(jp, "thickness", ppath),
                               join(ppath, "thickness"));
    p.plane_point = get_vec(require(jp, "plane_point", ppath), dim,
                            join(ppath, "plane_point"));
    p.plane_normal = get_vec(require(jp, "plane_normal", ppath), dim,
                             join(ppath, "plane_normal"));
    term.params = p;
  } else {
    fail_field(join(path, "kind"), "unknown potential kind '" + kind + "'");
  }
  return term;
}

MeshMaterial parse_material(const json& j, const std::string& path) {
  check_object(j, path,
               {"vertex_mass", "spring_stiffness", "hinge_stiffness",
                "spring_step_ticks", "hinge_step_ticks"});
  MeshMaterial mat;
  mat.vertex_mass = get_positive(require(j, "vertex_mass", path),
                                 join(path, "vertex_mass"));
  mat.spring_stiffness = get_nonnegative(
      require(j, "spring_stiffness", path), join(path, "spring_stiffness"));
  if (const json* h = find(j, "hinge_stiffness")) {
    mat.hinge_stiffness = get_nonnegative(*h, join(path, "hinge_stiffness"));
  }
  if (const json* s = find(j, "spring_step_ticks")) {
    mat.spring_step_ticks = get_ticks(*s, join(path, "spring_step_ticks"));
  }
  if (const json* s = find(j, "hinge_step_ticks")) {
    mat.hinge_step_ticks = get_ticks(*s, join(path, "hinge_step_ticks"));
  }
  return mat;
}

}  // namespace

Scenario load_scenario(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    // Recover line and column from the byte offset for a precise report.
    std::size_t line = 1, col = 1;
    const std::size_t stop =
        std::min(text.size(), static_cast<std::size_t>(
                                  e.byte > 0 ? e.byte - 1 : 0));
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ScenarioError("syntax error at line " + std::to_string(line) +
                        ", column " + std::to_string(col) + ": " + e.what());
  }

  check_object(doc, "",
               {"dimension", "tick_duration", "duration_ticks",
                "diagnostics_stride", "output", "vertices", "terms", "mesh",
                "contacts", "bodies"});

  Scenario sc;
  if (const json* jd = find(doc, "dimension")) {
    const Tick d = get_integer(*jd, "dimension");
    if (d != 2 && d != 3) fail_field("dimension", "must be 2 or 3");
    sc.dimension = static_cast<int>(d);
  }
  sc.tick_duration =
      get_positive(require(doc, "tick_duration", ""), "tick_duration");
  sc.duration_ticks =
      get_ticks(require(doc, "duration_ticks", ""), "duration_ticks");
  if (const json* js = find(doc, "diagnostics_stride")) {
    sc.diagnostics_stride =
        static_cast<std::size_t>(get_ticks(*js, "diagnostics_stride"));
  }
  if (const json* jo = find(doc, "output")) {
    if (!jo->is_string()) fail_field("output", "must be a string");
    sc.output_path = jo->get<std::string>();
  }

  sc.positions.dim = sc.dimension;
  sc.velocities.dim = sc.dimension;
  const std::size_t dim = static_cast<std::size_t>(sc.dimension);

  if (const json* jv = find(doc, "vertices")) {
    if (!jv->is_array()) fail_field("vertices", "must be an array");
    for (std::size_t i = 0; i < jv->size(); ++i) {
      const std::string path = at("vertices", i);
      const json& v = (*jv)[i];
      check_object(v, path, {"pos", "vel", "mass"});
      const auto pos =
          get_vec(require(v, "pos", path), sc.dimension, join(path, "pos"));
      std::array<double, 3> vel{0.0, 0.0, 0.0};
      if (const json* jvel = find(v, "vel")) {
        vel = get_vec(*jvel, sc.dimension, join(path, "vel"));
      }
      for (std::size_t c = 0; c < dim; ++c) {
        sc.positions.coords.push_back(pos[c]);
        sc.velocities.coords.push_back(vel[c]);
      }
      sc.mass.masses.push_back(
          get_positive(require(v, "mass", path), join(path, "mass")));
    }
  }

  if (const json* jt = find(doc, "terms")) {
    if (!jt->is_array()) fail_field("terms", "must be an array");
    for (std::size_t i = 0; i < jt->size(); ++i) {
      sc.terms.push_back(parse_term((*jt)[i], sc.dimension, at("terms", i)));
    }
  }

  if (const json* jm = find(doc, "mesh")) {
    if (!jm->is_array()) fail_field("mesh", "must be an array");
    for (std::size_t i = 0; i < jm->size(); ++i) {
      const std::string path = at("mesh", i);
      const json& m = (*jm)[i];
      check_object(m, path,
                   {"type", "count", "spacing", "nx", "ny", "boundary_mass",
                    "subdivisions", "radius", "origin", "velocity",
                    "material"});
      const json& jtype = require(m, "type", path);
      if (!jtype.is_string()) fail_field(join(path, "type"), "must be a string");
      const std::string type = jtype.get<std::string>();

      std::array<double, 3> origin{0.0, 0.0, 0.0};
      if (const json* jo = find(m, "origin")) {
        origin = get_vec(*jo, sc.dimension, join(path, "origin"));
      }
      std::array<double, 3> velocity{0.0, 0.0, 0.0};
      if (const json* jvel = find(m, "velocity")) {
        velocity = get_vec(*jvel, sc.dimension, join(path, "velocity"));
      }

      MeshBuilderSpec spec;
      spec.material = parse_material(require(m, "material", path),
                                     join(path, "material"));
      if (type == "chain") {
        ChainSpec shape;
        shape.count = static_cast<std::size_t>(
            get_ticks(require(m, "count", path), join(path, "count")));
        shape.spacing = get_positive(require(m, "spacing", path),
                                     join(path, "spacing"));
        spec.shape = shape;
      } else if (type == "grid_plate") {
        GridPlateSpec shape;
        shape.nx = static_cast<std::size_t>(
            get_ticks(require(m, "nx", path), join(path, "nx")));
        shape.ny = static_cast<std::size_t>(
            get_ticks(require(m, "ny", path), join(path, "ny")));
        shape.spacing = get_positive(require(m, "spacing", path),
                                     join(path, "spacing"));
        if (const json* jb = find(m, "boundary_mass")) {
          shape.boundary_mass =
              get_positive(*jb, join(path, "boundary_mass"));
        }
        spec.shape = shape;
      } else if (type == "shell_sphere") {
        ShellSphereSpec shape;
        const Tick sub = get_integer(require(m, "subdivisions", path),
                                     join(path, "subdivisions"));
        if (sub < 0) fail_field(join(path, "subdivisions"), "must be >= 0");
        shape.subdivisions = static_cast<unsigned>(sub);
        shape.radius = get_positive(require(m, "radius", path),
                                    join(path, "radius"));
        shape.center = origin;
        spec.shape = shape;
      } else {
        fail_field(join(path, "type"), "unknown mesh type '" + type + "'");
      }

      BuiltMesh built;
      try {
        built = build_mesh(spec, sc.dimension);
      } catch (const ContractError& e) {
        fail_field(path, e.what());
      }

      const std::size_t base = sc.positions.vertex_count();
      const bool translate = type != "shell_sphere";
      for (std::size_t v = 0; v < built.vertex_count(); ++v) {
        for (std::size_t c = 0; c < dim; ++c) {
          double x = built.positions[v * dim + c];
          if (translate) x += origin[c];
          sc.positions.coords.push_back(x);
          sc.velocities.coords.push_back(velocity[c]);
        }
        sc.mass.masses.push_back(built.masses[v]);
      }
      for (auto* bucket : {&built.spring_terms, &built.hinge_terms}) {
        for (PotentialTerm& term : *bucket) {
          for (std::size_t& s : term.stencil) s += base;
          sc.terms.push_back(std::move(term));
        }
      }
      sc.bodies.push_back({base, base + built.vertex_count()});
    }
  }

  // Body ranges may also come in explicitly (serialized documents).
  if (const json* jb = find(doc, "bodies")) {
    if (!jb->is_array()) fail_field("bodies", "must be an array");
    if (!sc.bodies.empty()) {
      fail_field("bodies", "cannot mix explicit bodies with mesh blocks");
    }
    for (std::size_t i = 0; i < jb->size(); ++i) {
      const std::string path = at("bodies", i);
      check_object((*jb)[i], path, {"first", "last"});
      Scenario::BodyRange range;
      range.first = get_index(require((*jb)[i], "first", path),
                              join(path, "first"));
      range.last =
          get_index(require((*jb)[i], "last", path), join(path, "last"));
      if (range.last < range.first ||
          range.last > sc.positions.vertex_count()) {
        fail_field(path, "range out of order or past the vertex count");
      }
      sc.bodies.push_back(range);
    }
  }

  if (const json* jc = find(doc, "contacts")) {
    if (!jc->is_array()) fail_field("contacts", "must be an array");
    for (std::size_t i = 0; i < jc->size(); ++i) {
      const std::string path = at("contacts", i);
      const json& c = (*jc)[i];
      check_object(c, path, {"bodies", "stiffness", "thickness", "step_ticks"});
      const json& jb = require(c, "bodies", path);
      if (!jb.is_array() || jb.size() != 2) {
        fail_field(join(path, "bodies"), "must be an array of two body indices");
      }
      const std::size_t ba = get_index(jb[0], at(join(path, "bodies"), 0));
      const std::size_t bb = get_index(jb[1], at(join(path, "bodies"), 1));
      if (ba >= sc.bodies.size() || bb >= sc.bodies.size()) {
        fail_field(join(path, "bodies"),
                   "body index out of range, have " +
                       std::to_string(sc.bodies.size()) + " bodies");
      }
      if (ba == bb) {
        fail_field(join(path, "bodies"), "bodies must be distinct");
      }
      PenaltyPointPointParams params;
      params.stiffness = get_nonnegative(require(c, "stiffness", path),
                                         join(path, "stiffness"));
      params.thickness = get_positive(require(c, "thickness", path),
                                      join(path, "thickness"));
      const Tick step =
          get_ticks(require(c, "step_ticks", path), join(path, "step_ticks"));
      for (std::size_t a = sc.bodies[ba].first; a < sc.bodies[ba].last; ++a) {
        for (std::size_t b = sc.bodies[bb].first; b < sc.bodies[bb].last;
             ++b) {
          PotentialTerm term;
          term.stencil = {a, b};
          term.step_ticks = step;
          term.params = params;
          sc.terms.push_back(std::move(term));
        }
      }
    }
  }

  if (sc.positions.vertex_count() == 0) {
    throw ScenarioError("scenario defines no vertices");
  }

  try {
    validate_system(sc.positions, sc.velocities, sc.mass, sc.terms);
  } catch (const ContractError& e) {
    throw ScenarioError(e.what());
  }
  for (std::size_t i = 0; i < sc.terms.size(); ++i) {
    if (sc.terms[i].step_ticks > sc.duration_ticks) {
      throw ScenarioError(
          "field 'terms[" + std::to_string(i) + "].step_ticks': " +
          std::to_string(sc.terms[i].step_ticks) +
          " exceeds duration_ticks " + std::to_string(sc.duration_ticks));
    }
  }
  return sc;
}

Scenario load_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path.string() + "' for reading");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return load_scenario(buf.str());
  } catch (const ScenarioError& e) {
    throw ScenarioError(path.string() + ": " + e.what());
  }
}

std::string serialize_scenario(const Scenario& sc) {
  json doc;
  doc["dimension"] = sc.dimension;
  doc["tick_duration"] = sc.tick_duration;
  doc["duration_ticks"] = sc.duration_ticks;
  doc["diagnostics_stride"] = sc.diagnostics_stride;
  if (!sc.output_path.empty()) doc["output"] = sc.output_path;

  const std::size_t dim = static_cast<std::size_t>(sc.dimension);
  json verts = json::array();
  for (std::size_t a = 0; a < sc.positions.vertex_count(); ++a) {
    json v;
    json pos = json::array(), vel = json::array();
    for (std::size_t c = 0; c < dim; ++c) {
      pos.push_back(sc.positions.coords[a * dim + c]);
      vel.push_back(sc.velocities.coords[a * dim + c]);
    }
    v["pos"] = std::move(pos);
    v["vel"] = std::move(vel);
    v["mass"] = sc.mass.masses[a];
    verts.push_back(std::move(v));
  }
  doc["vertices"] = std::move(verts);

  json terms = json::array();
  for (const PotentialTerm& term : sc.terms) {
    json t;
    t["kind"] = std::string(kind_name(term.kind()));
    t["stencil"] = term.stencil;
    t["step_ticks"] = term.step_ticks;
    json p;
    switch (term.kind()) {
      case PotentialKind::Spring: {
        const auto& sp = std::get<SpringParams>(term.params);
        p["stiffness"] = sp.stiffness;
        p["rest_length"] = sp.rest_length;
        break;
      }
      case PotentialKind::HingeBend: {
        const auto& hp = std::get<HingeParams>(term.params);
        p["stiffness"] = hp.stiffness;
        p["rest_angle"] = hp.rest_angle;
        break;
      }
      case PotentialKind::Gravity: {
        const auto& gp = std::get<GravityParams>(term.params);
        json g = json::array();
        for (std::size_t c = 0; c < dim; ++c) g.push_back(gp.g[c]);
        p["g"] = std::move(g);
        break;
      }
      case PotentialKind::PenaltyPointPoint: {
        const auto& pp = std::get<PenaltyPointPointParams>(term.params);
        p["stiffness"] = pp.stiffness;
        p["thickness"] = pp.thickness;
        break;
      }
      case PotentialKind::PenaltyPointPlane: {
        const auto& pl = std::get<PenaltyPointPlaneParams>(term.params);
        p["stiffness"] = pl.stiffness;
        p["thickness"] = pl.thickness;
        json pt = json::array(), n = json::array();
        for (std::size_t c = 0; c < dim; ++c) {
          pt.push_back(pl.plane_point[c]);
          n.push_back(pl.plane_normal[c]);
        }
        p["plane_point"] = std::move(pt);
        p["plane_normal"] = std::move(n);
        break;
      }
    }
    t["params"] = std::move(p);
    terms.push_back(std::move(t));
  }
  doc["terms"] = std::move(terms);

  if (!sc.bodies.empty()) {
    json bodies = json::array();
    for (const auto& b : sc.bodies) {
      bodies.push_back({{"first", b.first}, {"last", b.last}});
    }
    doc["bodies"] = std::move(bodies);
  }
  return doc.dump(2);
}

SystemState initial_state(const Scenario& sc) {
  SystemState state;
  state.q = sc.positions;
  state.v = sc.velocities;
  state.tick = 0;
  state.tick_duration = sc.tick_duration;
  return state;
}

}  // namespace avi
