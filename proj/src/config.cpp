// Copyright 2026 The frcopt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "frc/config.hpp"

#include "frc/error.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

namespace frc::app {

namespace {

const char* objective_name(opt::Objective o) {
  return o == opt::Objective::OutputDisplacement ? "output_displacement" : "compliance";
}

json material_json(const material::MatrixMaterial& m) {
  return {{"name", m.name}, {"E", m.E}, {"nu", m.nu}, {"mass_density", m.mass_density}};
}

json pairs_json(const std::vector<std::pair<int, double>>& v) {
  json a = json::array();
  for (const auto& [dof, value] : v) a.push_back(json::array({dof, value}));
  return a;
}

json optional_json(const std::optional<int>& v) { return v ? json(*v) : json(nullptr); }

// Reads typed fields from a merged document, collecting every problem.
class Reader {
 public:
  Reader(const json& root, std::vector<std::string>& errors) : root_(root), errors_(errors) {}

  const json* at(const std::string& path) const {
    const json* node = &root_;
    std::size_t start = 0;
    while (start <= path.size()) {
      const std::size_t dot = path.find('.', start);
      const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
      if (!node->is_object() || !node->contains(key)) return nullptr;
      node = &(*node)[key];
      if (dot == std::string::npos) break;
      start = dot + 1;
    }
    return node;
  }

  void fail(const std::string& path, const std::string& msg) { errors_.push_back(path + ": " + msg); }

  void number(const std::string& path, double& out) { number_at(at(path), path, out); }

  void number_at(const json* v, const std::string& path, double& out) {
    if (!v || !v->is_number()) return fail(path, "expected a number");
    out = v->get<double>();
    if (!std::isfinite(out)) fail(path, "must be finite");
  }

  void integer(const std::string& path, int& out) { integer_at(at(path), path, out); }

  void integer_at(const json* v, const std::string& path, int& out) {
    if (!v || !v->is_number()) return fail(path, "expected an integer");
    const double d = v->get<double>();
    if (d != std::floor(d) || std::abs(d) > 2e9) return fail(path, "expected an integer");
    out = static_cast<int>(d);
  }

  void boolean(const std::string& path, bool& out) {
    const json* v = at(path);
    if (!v || !v->is_boolean()) return fail(path, "expected true or false");
    out = v->get<bool>();
  }

  void string(const std::string& path, std::string& out) {
    const json* v = at(path);
    if (!v || !v->is_string()) return fail(path, "expected a string");
    out = v->get<std::string>();
  }

  void optional_int(const std::string& path, std::optional<int>& out) {
    const json* v = at(path);
    if (v && v->is_null()) {
      out.reset();
      return;
    }
    int x = 0;
    const std::size_t before = errors_.size();
    integer_at(v, path, x);
    if (errors_.size() == before) out = x;
  }

  void int_list(const std::string& path, std::vector<int>& out) {
    const json* v = at(path);
    if (!v || !v->is_array()) return fail(path, "expected an array of integers");
    out.clear();
    for (std::size_t i = 0; i < v->size(); ++i) {
      int x = 0;
      integer_at(&(*v)[i], path + "[" + std::to_string(i) + "]", x);
      out.push_back(x);
    }
  }

  void pair_list(const std::string& path, std::vector<std::pair<int, double>>& out) {
    const json* v = at(path);
    if (!v || !v->is_array()) return fail(path, "expected an array of [dof, value] pairs");
    out.clear();
    for (std::size_t i = 0; i < v->size(); ++i) {
      const std::string p = path + "[" + std::to_string(i) + "]";
      const json& item = (*v)[i];
      if (!item.is_array() || item.size() != 2) {
        fail(p, "expected [dof, value]");
        continue;
      }
      int dof = 0;
      double value = 0.0;
      integer_at(&item[0], p + "[0]", dof);
      number_at(&item[1], p + "[1]", value);
      out.emplace_back(dof, value);
    }
  }

  void check(bool ok, const std::string& path, const std::string& msg) {
    if (!ok) fail(path, msg);
  }

 private:
  const json& root_;
  std::vector<std::string>& errors_;
};

// Recursively overlays `user` on `base`, reporting keys absent from base.
void merge(json& base, const json& user, const std::string& prefix, std::vector<std::string>& errors) {
  for (auto it = user.begin(); it != user.end(); ++it) {
    const std::string path = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (!base.contains(it.key())) {
      errors.push_back(path + ": unknown key");
      continue;
    }
    json& slot = base[it.key()];
    if (slot.is_object() && it.value().is_object()) {
      merge(slot, it.value(), path, errors);
    } else {
      slot = it.value();
    }
  }
}

void collect_leaves(const json& node, const std::string& prefix,
                    std::vector<std::pair<std::string, std::string>>& leaves) {
  for (auto it = node.begin(); it != node.end(); ++it) {
    const std::string path = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (it.value().is_object()) {
      collect_leaves(it.value(), path, leaves);
    } else {
      leaves.emplace_back(it.key(), path);
    }
  }
}

RunConfig read_config(const json& merged, std::vector<std::string>& errors) {
  Reader r(merged, errors);
  RunConfig c;
  r.string("problem", c.problem);
  {
    const json* seed = r.at("seed");
    if (seed && seed->is_number_unsigned()) {
      c.seed = seed->get<std::uint64_t>();
    } else if (seed && seed->is_number_integer() && seed->get<std::int64_t>() >= 0) {
      c.seed = static_cast<std::uint64_t>(seed->get<std::int64_t>());
    } else {
      r.fail("seed", "expected a non-negative integer");
    }
  }
  r.string("output_dir", c.output_dir);

  r.integer("mesh.nelx", c.nelx);
  r.integer("mesh.nely", c.nely);
  r.number("mesh.h", c.h);
  r.check(c.nelx >= 1, "mesh.nelx", "must be >= 1 (got " + std::to_string(c.nelx) + ")");
  r.check(c.nely >= 1, "mesh.nely", "must be >= 1 (got " + std::to_string(c.nely) + ")");
  r.check(c.h > 0.0, "mesh.h", "must be positive");

  r.number("loads.magnitude", c.loads.magnitude);
  r.number("loads.spring_in", c.loads.spring_in);
  r.number("loads.spring_out", c.loads.spring_out);
  r.check(c.loads.spring_in >= 0.0, "loads.spring_in", "must be >= 0");
  r.check(c.loads.spring_out >= 0.0, "loads.spring_out", "must be >= 0");

  r.number("matrix.E", c.matrix.E);
  r.number("matrix.nu", c.matrix.nu);
  r.check(c.matrix.E > 0.0, "matrix.E", "must be positive");
  r.check(c.matrix.nu > -1.0 && c.matrix.nu < 0.5, "matrix.nu", "must lie in (-1, 0.5)");

  r.number("fiber.E_par", c.fiber.E_par);
  r.number("fiber.E_perp", c.fiber.E_perp);
  r.number("fiber.nu", c.fiber.nu);
  r.number("fiber.G", c.fiber.G);
  try {
    c.fiber.validate();
  } catch (const std::exception& e) {
    r.fail("fiber", e.what());
  }

  const json* mats = r.at("materials");
  if (!mats || !mats->is_array()) {
    r.fail("materials", "expected an array");
  } else {
    for (std::size_t i = 0; i < mats->size(); ++i) {
      const std::string p = "materials[" + std::to_string(i) + "]";
      const json& m = (*mats)[i];
      if (!m.is_object()) {
        r.fail(p, "expected an object");
        continue;
      }
      for (auto it = m.begin(); it != m.end(); ++it) {
        if (it.key() != "name" && it.key() != "E" && it.key() != "nu" && it.key() != "mass_density") {
          r.fail(p + "." + it.key(), "unknown key");
        }
      }
      material::MatrixMaterial mm;
      mm.name = "material" + std::to_string(i + 1);
      if (m.contains("name")) {
        if (m["name"].is_string()) {
          mm.name = m["name"].get<std::string>();
        } else {
          r.fail(p + ".name", "expected a string");
        }
      }
      r.number_at(m.contains("E") ? &m["E"] : nullptr, p + ".E", mm.E);
      if (m.contains("nu")) r.number_at(&m["nu"], p + ".nu", mm.nu);
      r.number_at(m.contains("mass_density") ? &m["mass_density"] : nullptr, p + ".mass_density",
                  mm.mass_density);
      r.check(mm.E > 0.0, p + ".E", "must be positive");
      r.check(mm.nu > -1.0 && mm.nu < 0.5, p + ".nu", "must lie in (-1, 0.5)");
      r.check(mm.mass_density > 0.0, p + ".mass_density", "must be positive");
      c.materials.push_back(mm);
    }
  }
  r.number("void.E", c.void_material.E);
  r.number("void.nu", c.void_material.nu);
  r.number("void.mass_density", c.void_material.mass_density);
  r.check(c.void_material.E > 0.0, "void.E", "must be positive");
  r.check(c.void_material.mass_density > 0.0, "void.mass_density", "must be positive");

  r.number("constraints.V_m", c.constraints.V_m);
  r.number("constraints.r_f", c.constraints.r_f);
  r.number("constraints.mass", c.constraints.mass);
  r.number("constraints.V_f", c.constraints.V_f);
  r.check(c.constraints.V_m > 0.0 && c.constraints.V_m <= 1.0, "constraints.V_m", "must lie in (0, 1]");
  r.check(c.constraints.r_f >= 0.0 && c.constraints.r_f <= 1.0, "constraints.r_f", "must lie in [0, 1]");
  r.check(c.constraints.mass > 0.0, "constraints.mass", "must be positive");
  r.check(c.constraints.V_f > 0.0 && c.constraints.V_f <= 1.0, "constraints.V_f", "must lie in (0, 1]");

  auto& n = c.network;
  r.integer("network.num_frequencies", n.num_frequencies);
  r.number("network.l_min", n.l_min);
  r.number("network.l_max", n.l_max);
  r.int_list("network.common_widths", n.common_widths);
  r.int_list("network.branch_widths", n.branch_widths);
  r.number("network.rho_f_lower", n.rho_f_lower);
  r.number("network.rho_f_upper", n.rho_f_upper);
  {
    const json* v = r.at("network.fixed_rho_m");
    if (v && v->is_null()) {
      n.fixed_rho_m.reset();
    } else {
      double x = 0.0;
      const std::size_t before = errors.size();
      r.number_at(v, "network.fixed_rho_m", x);
      if (errors.size() == before) n.fixed_rho_m = x;
    }
  }
  r.check(n.num_frequencies >= 1, "network.num_frequencies", "must be >= 1");
  r.check(n.l_min > 0.0, "network.l_min", "must be positive");
  r.check(n.l_min < n.l_max || n.l_min == n.l_max, "network.l_min", "must not exceed network.l_max");
  try {
    n.validate();
  } catch (const std::exception& e) {
    r.fail("network", e.what());
  }

  auto& s = c.schedule;
  r.number("schedule.lr", s.lr);
  r.number("schedule.alpha0", s.alpha0);
  r.number("schedule.alpha_step", s.alpha_step);
  r.number("schedule.alpha_max", s.alpha_max);
  r.number("schedule.p0", s.p0);
  r.number("schedule.p_step", s.p_step);
  r.number("schedule.p_max", s.p_max);
  r.integer("schedule.max_epochs", s.max_epochs);
  r.number("schedule.dw_tol", s.dw_tol);
  r.boolean("schedule.stop_on_convergence", s.stop_on_convergence);
  try {
    s.validate();
  } catch (const std::exception& e) {
    r.fail("schedule", e.what());
  }

  auto& x = c.extraction;
  r.number("extraction.thickness", x.thickness);
  r.number("extraction.step", x.step);
  r.number("extraction.void_threshold", x.void_threshold);
  r.integer("extraction.max_points", x.max_points);
  r.number("extraction.min_seed_deficit", x.min_seed_deficit);
  try {
    x.validate();
  } catch (const std::exception& e) {
    r.fail("extraction", e.what());
  }

  r.integer("output.field_resolution", c.field_resolution);
  r.check(c.field_resolution >= 1, "output.field_resolution", "must be >= 1");

  r.int_list("custom.fixed_dofs", c.custom.fixed_dofs);
  r.pair_list("custom.loads", c.custom.loads);
  r.pair_list("custom.springs", c.custom.springs);
  r.optional_int("custom.input_dof", c.custom.input_dof);
  r.optional_int("custom.output_dof", c.custom.output_dof);
  std::string objective = "compliance";
  r.string("custom.objective", objective);
  if (objective == "output_displacement") {
    c.custom.objective = opt::Objective::OutputDisplacement;
  } else if (objective != "compliance") {
    r.fail("custom.objective", "must be \"compliance\" or \"output_displacement\"");
  }

  bool known = false;
  for (const auto& p : problem_names()) known = known || p == c.problem;
  if (!known) r.fail("problem", "unknown problem \"" + c.problem + "\"");
  if (c.problem == "multi_material_cantilever" && c.materials.empty()) {
    r.fail("materials", "multi_material_cantilever needs at least one material");
  }
  if (c.problem != "multi_material_cantilever" && !c.materials.empty()) {
    r.fail("materials", "only multi_material_cantilever takes a material list");
  }
  if (c.problem == "custom" && errors.empty()) {
    try {
      build_problem(c).validate();
    } catch (const std::exception& e) {
      r.fail("custom", e.what());
    }
  }
  return c;
}

json prepare(const json& doc, const std::vector<std::string>& overrides, std::vector<std::string>& errors) {
  if (!doc.is_object()) {
    errors.push_back("config: expected a JSON object");
    return default_json("tip_cantilever");
  }
  json user = doc;
  std::string problem = "tip_cantilever";
  if (user.contains("problem") && user["problem"].is_string()) problem = user["problem"].get<std::string>();
  const json defaults = default_json(problem);
  for (const auto& o : overrides) {
    try {
      apply_override(user, defaults, o);
    } catch (const std::exception& e) {
      errors.push_back(std::string("override '") + o + "': " + e.what());
    }
  }
  // A problem override changes which defaults apply.
  if (user.contains("problem") && user["problem"].is_string()) problem = user["problem"].get<std::string>();
  json merged = default_json(problem);
  merge(merged, user, "", errors);
  return merged;
}

}  // namespace

const std::vector<std::string>& problem_names() {
  static const std::vector<std::string> names = {"tip_cantilever",    "michell_half",
                                                 "top_loaded_beam",   "compliant_inverter",
                                                 "multi_material_cantilever", "custom"};
  return names;
}

RunConfig default_config(const std::string& problem) {
  RunConfig c;
  c.problem = problem;
  if (problem == "top_loaded_beam") {
    c.constraints.V_m = 1.0;
    c.constraints.r_f = 1.0;
  } else if (problem == "compliant_inverter") {
    c.constraints.V_m = 0.3;
    c.constraints.r_f = 0.5;
  } else if (problem == "multi_material_cantilever") {
    c.fiber = {4.0, 1.0, 0.3, 0.7};
    c.materials = {{"matrix1", 0.6, 0.3, 0.4}, {"matrix2", 4.0, 0.3, 1.0}};
    c.constraints.mass = 600.0;
    c.constraints.V_f = 0.25;
  }
  return c;
}

json default_json(const std::string& problem) { return to_json(default_config(problem)); }

json to_json(const RunConfig& c) {
  json mats = json::array();
  for (const auto& m : c.materials) mats.push_back(material_json(m));
  json v = material_json(c.void_material);
  v.erase("name");
  const auto& n = c.network;
  const auto& s = c.schedule;
  const auto& x = c.extraction;
  return {
      {"problem", c.problem},
      {"seed", c.seed},
      {"output_dir", c.output_dir},
      {"mesh", {{"nelx", c.nelx}, {"nely", c.nely}, {"h", c.h}}},
      {"loads",
       {{"magnitude", c.loads.magnitude}, {"spring_in", c.loads.spring_in}, {"spring_out", c.loads.spring_out}}},
      {"matrix", {{"E", c.matrix.E}, {"nu", c.matrix.nu}}},
      {"fiber", {{"E_par", c.fiber.E_par}, {"E_perp", c.fiber.E_perp}, {"nu", c.fiber.nu}, {"G", c.fiber.G}}},
      {"materials", mats},
      {"void", v},
      {"constraints",
       {{"V_m", c.constraints.V_m}, {"r_f", c.constraints.r_f}, {"mass", c.constraints.mass}, {"V_f", c.constraints.V_f}}},
      {"network",
       {{"num_frequencies", n.num_frequencies},
        {"l_min", n.l_min},
        {"l_max", n.l_max},
        {"common_widths", n.common_widths},
        {"branch_widths", n.branch_widths},
        {"rho_f_lower", n.rho_f_lower},
        {"rho_f_upper", n.rho_f_upper},
        {"fixed_rho_m", n.fixed_rho_m ? json(*n.fixed_rho_m) : json(nullptr)}}},
      {"schedule",
       {{"lr", s.lr},
        {"alpha0", s.alpha0},
        {"alpha_step", s.alpha_step},
        {"alpha_max", s.alpha_max},
        {"p0", s.p0},
        {"p_step", s.p_step},
        {"p_max", s.p_max},
        {"max_epochs", s.max_epochs},
        {"dw_tol", s.dw_tol},
        {"stop_on_convergence", s.stop_on_convergence}}},
      {"extraction",
       {{"thickness", x.thickness},
        {"step", x.step},
        {"void_threshold", x.void_threshold},
        {"max_points", x.max_points},
        {"min_seed_deficit", x.min_seed_deficit}}},
      {"output", {{"field_resolution", c.field_resolution}}},
      {"custom",
       {{"fixed_dofs", c.custom.fixed_dofs},
        {"loads", pairs_json(c.custom.loads)},
        {"springs", pairs_json(c.custom.springs)},
        {"input_dof", optional_json(c.custom.input_dof)},
        {"output_dof", optional_json(c.custom.output_dof)},
        {"objective", objective_name(c.custom.objective)}}},
  };
}

void apply_override(json& doc, const json& defaults, const std::string& assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw std::invalid_argument("expected key=value");
  std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  if (key.find('.') == std::string::npos && !defaults.contains(key)) {
    std::vector<std::pair<std::string, std::string>> leaves;
    collect_leaves(defaults, "", leaves);
    std::vector<std::string> matches;
    for (const auto& [leaf, path] : leaves) {
      if (leaf == key) matches.push_back(path);
    }
    if (matches.empty()) throw std::invalid_argument("unknown key \"" + key + "\"");
    if (matches.size() > 1) {
      std::string all;
      for (const auto& m : matches) all += (all.empty() ? "" : ", ") + m;
      throw std::invalid_argument("ambiguous key \"" + key + "\" (" + all + ")");
    }
    key = matches.front();
  }
  json* node = &doc;
  const json* def = &defaults;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (!def->is_object() || !def->contains(part)) throw std::invalid_argument("unknown key \"" + key + "\"");
    def = &(*def)[part];
    if (!node->is_object()) *node = json::object();
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    node = &(*node)[part];
    start = dot + 1;
  }
}

std::vector<std::string> check_config(const json& doc, const std::vector<std::string>& overrides) {
  std::vector<std::string> errors;
  const json merged = prepare(doc, overrides, errors);
  read_config(merged, errors);
  return errors;
}

RunConfig parse_config(const json& doc, const std::vector<std::string>& overrides) {
  std::vector<std::string> errors;
  const json merged = prepare(doc, overrides, errors);
  RunConfig c = read_config(merged, errors);
  if (!errors.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw ConfigError(msg);
  }
  return c;
}

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded()) throw ConfigError("config file '" + path + "' is not valid JSON");
  if (const char* env = std::getenv("FRC_OUTPUT_DIR"); env && *env && doc.is_object()) {
    doc["output_dir"] = env;
  }
  return parse_config(doc, overrides);
}

namespace {

int mid_node_right(const fea::StructuredGrid& g, int row) { return g.node_index(g.nelx(), row); }

void cantilever_bcs(const fea::StructuredGrid& g, double magnitude, fea::BoundaryConditions& bcs) {
  for (int j = 0; j <= g.nely(); ++j) bcs.fix_node(g.node_index(0, j));
  if (g.nely() % 2 == 0) {
    bcs.add_load(fea::dof_y(mid_node_right(g, g.nely() / 2)), -magnitude);
  } else {
    bcs.add_load(fea::dof_y(mid_node_right(g, g.nely() / 2)), -0.5 * magnitude);
    bcs.add_load(fea::dof_y(mid_node_right(g, g.nely() / 2 + 1)), -0.5 * magnitude);
  }
}

}  // namespace

opt::Problem build_problem(const RunConfig& cfg) { return build_problem(cfg, cfg.nelx, cfg.nely); }

opt::Problem build_problem(const RunConfig& cfg, int nelx, int nely) {
  opt::Problem p;
  p.grid = fea::StructuredGrid(nelx, nely, cfg.h);
  p.matrix = cfg.matrix;
  p.fiber = cfg.fiber;
  p.constraints = cfg.constraints;
  const auto& g = p.grid;
  auto& bcs = p.bcs;
  const double f = cfg.loads.magnitude;

  if (cfg.problem == "tip_cantilever") {
    cantilever_bcs(g, f, bcs);
  } else if (cfg.problem == "multi_material_cantilever") {
    cantilever_bcs(g, f, bcs);
    material::MaterialSet mats;
    mats.materials = cfg.materials;
    mats.void_material = cfg.void_material;
    mats.fiber = cfg.fiber;
    p.materials = mats;
  } else if (cfg.problem == "michell_half") {
    // Symmetry plane on the left edge, vertical support at its foot.
    for (int j = 0; j <= g.nely(); ++j) bcs.fix(fea::dof_x(g.node_index(0, j)));
    bcs.fix(fea::dof_y(g.node_index(0, 0)));
    bcs.add_load(fea::dof_y(g.node_index(g.nelx(), 0)), -f);
  } else if (cfg.problem == "top_loaded_beam") {
    bcs.fix_node(g.node_index(0, 0));
    bcs.fix_node(g.node_index(g.nelx(), 0));
    bcs.add_edge_load(g, fea::Edge::Top, 1, -f / g.width());
  } else if (cfg.problem == "compliant_inverter") {
    bcs.fix_node(g.node_index(0, 0));
    bcs.fix_node(g.node_index(0, g.nely()));
    const int in = fea::dof_x(g.node_index(0, g.nely() / 2));
    const int out = fea::dof_x(g.node_index(g.nelx(), g.nely() / 2));
    bcs.add_load(in, -f);
    if (cfg.loads.spring_in > 0.0) bcs.add_spring(in, cfg.loads.spring_in);
    if (cfg.loads.spring_out > 0.0) bcs.add_spring(out, cfg.loads.spring_out);
    bcs.input_dof = in;
    bcs.output_dof = out;
    p.objective = opt::Objective::OutputDisplacement;
  } else if (cfg.problem == "custom") {
    for (int d : cfg.custom.fixed_dofs) bcs.fix(d);
    for (const auto& [d, v] : cfg.custom.loads) bcs.add_load(d, v);
    for (const auto& [d, k] : cfg.custom.springs) bcs.add_spring(d, k);
    bcs.input_dof = cfg.custom.input_dof;
    bcs.output_dof = cfg.custom.output_dof;
    p.objective = cfg.custom.objective;
  } else {
    throw ConfigError("unknown problem \"" + cfg.problem + "\"");
  }
  return p;
}

}  // namespace frc::app
