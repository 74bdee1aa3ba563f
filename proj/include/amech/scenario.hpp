#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <toml.hpp>

#include "amech/integrate.hpp"
#include "amech/serialize.hpp"

namespace amech {

/// One simulation run: which model, which equations, where to start and what
/// to record.
struct Scenario {
  std::string model;
  std::string dynamics;  // lagrangian | hamiltonian | wong
  Vec initial_state;
  IntegratorConfig integrator;
  std::vector<std::string> monitors;
};

inline Scenario parse_scenario(const std::string& text, const std::string& source = "scenario") {
  toml::table tbl;
  try {
    tbl = toml::parse(text, source);
  } catch (const toml::parse_error& e) {
    throw ConfigError(source + ": " + std::string(e.description()));
  }
  Scenario sc;
  const auto model = tbl["model"].value<std::string>();
  if (!model) throw ConfigError(source + ": 'model' must be a string");
  sc.model = *model;
  sc.dynamics = tbl["dynamics"].value_or(std::string("lagrangian"));

  const toml::array* init = tbl["initial_state"].as_array();
  if (!init || init->empty()) throw ConfigError(source + ": 'initial_state' must be a non-empty array");
  sc.initial_state.resize(static_cast<Eigen::Index>(init->size()));
  for (std::size_t i = 0; i < init->size(); ++i) {
    const auto v = (*init)[i].value<double>();
    if (!v) throw ConfigError(source + ": 'initial_state' entries must be numbers");
    sc.initial_state[static_cast<Eigen::Index>(i)] = *v;
  }

  if (const toml::array* mons = tbl["monitors"].as_array()) {
    for (const auto& node : *mons) {
      const auto s = node.value<std::string>();
      if (!s) throw ConfigError(source + ": 'monitors' entries must be strings");
      sc.monitors.push_back(*s);
    }
  }
  if (const toml::table* integ = tbl["integrator"].as_table()) {
    sc.integrator.dt = (*integ)["dt"].value_or(sc.integrator.dt);
    sc.integrator.t_end = (*integ)["t_end"].value_or(sc.integrator.t_end);
    sc.integrator.method = (*integ)["method"].value_or(sc.integrator.method);
  }
  if (!(sc.integrator.dt > 0.0) || !(sc.integrator.t_end > 0.0)) {
    throw ConfigError(source + ": dt and t_end must be positive");
  }
  if (sc.integrator.method != "rk4-classic") throw ConfigError(source + ": unsupported method '" + sc.integrator.method + "'");
  return sc;
}

/// Reads a scenario file; a model given as a relative file path is resolved
/// against the scenario's directory when it exists there.
inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  Scenario sc = parse_scenario(buf.str(), path);
  namespace fs = std::filesystem;
  if (sc.model.rfind("builtin:", 0) != 0 && !models::builtin(sc.model)) {
    const fs::path rel = fs::path(path).parent_path() / sc.model;
    if (fs::path(sc.model).is_relative() && fs::exists(rel)) sc.model = rel.string();
  }
  return sc;
}

/// The state field and monitors of a scenario for a resolved model.
struct Simulation {
  StateField field;
  std::vector<Monitor> monitors;
  int m = 0;
  int n = 0;
  bool momentum_coordinates = false;  // fiber columns are p rather than y
};

namespace detail {

inline int section_index(const std::string& arg, int n) {
  std::string s = arg;
  if (!s.empty() && s[0] == 'e') s = s.substr(1);
  int k = 0;
  try {
    std::size_t used = 0;
    k = std::stoi(s, &used);
    if (used != s.size()) throw ConfigError("");
  } catch (const std::exception&) {
    throw ConfigError("momentum monitor needs a basis section e1..e" + std::to_string(n) + ", got '" + arg + "'");
  }
  if (k < 1 || k > n) throw ConfigError("momentum section '" + arg + "' is out of range");
  return k - 1;
}

}  // namespace detail

inline Simulation build_simulation(const Model& md, const Scenario& sc) {
  Simulation sim;
  sim.m = md.chart.m;
  sim.n = md.chart.n;
  const int m = sim.m, n = sim.n;
  if (sc.initial_state.size() != m + n) {
    throw ConfigError("initial_state has " + std::to_string(sc.initial_state.size()) + " entries, model needs " +
                      std::to_string(m + n));
  }

  // Every monitor is written against a point of E*; the Lagrangian state is
  // pushed forward through Leg first.
  std::function<DualPoint(const Vec&)> to_dual;
  std::function<double(const Vec&)> energy;
  if (sc.dynamics == "lagrangian") {
    if (!md.lagrangian) throw ConfigError("model '" + md.name + "' has no Lagrangian");
    const LagrangianSystem sys = *md.lagrangian;
    sim.field = [sys, m](const Vec& s) { return el_vector_field(sys, PrimalPoint::split(s, m)).flat(); };
    to_dual = [sys, m](const Vec& s) { return legendre_map(sys, PrimalPoint::split(s, m)); };
    energy = [sys, m](const Vec& s) { return lagrangian_energy(sys, PrimalPoint::split(s, m)); };
  } else if (sc.dynamics == "hamiltonian" || sc.dynamics == "wong") {
    if (!md.hamiltonian) throw ConfigError("model '" + md.name + "' has no Hamiltonian");
    const HamiltonianSystem sys = *md.hamiltonian;
    sim.momentum_coordinates = true;
    if (sc.dynamics == "hamiltonian") {
      sim.field = [sys, m](const Vec& s) { return hamilton_vector_field(sys, DualPoint::split(s, m)).flat(); };
    } else {
      if (!md.principal || !md.wong) throw ConfigError("model '" + md.name + "' has no Wong data");
      const PrincipalData pd = *md.principal;
      const WongData wd = *md.wong;
      sim.field = [pd, wd, m](const Vec& s) { return wong_rhs(pd, wd, DualPoint::split(s, m)).flat(); };
    }
    to_dual = [m](const Vec& s) { return DualPoint::split(s, m); };
    energy = [sys](const Vec& s) { return sys.H(s); };
  } else {
    throw ConfigError("unknown dynamics '" + sc.dynamics + "'");
  }

  for (const std::string& name : sc.monitors) {
    if (name == "energy") {
      sim.monitors.push_back({name, energy});
    } else if (name.rfind("momentum:", 0) == 0) {
      const int k = detail::section_index(name.substr(9), n);
      sim.monitors.push_back({name, [to_dual, k](const Vec& s) { return to_dual(s).p[k]; }});
    } else if (name.rfind("casimir:", 0) == 0) {
      const auto it = md.casimirs.find(name.substr(8));
      if (it == md.casimirs.end()) throw ConfigError("model '" + md.name + "' has no casimir '" + name.substr(8) + "'");
      const auto c = it->second;
      sim.monitors.push_back({name, [to_dual, c](const Vec& s) { return c(to_dual(s)); }});
    } else if (name == "hj-residual") {
      if (!md.hj_generator) throw ConfigError("model '" + md.name + "' has no Hamilton-Jacobi generator");
      const VectorField alpha = exact_section(md.chart, *md.hj_generator);
      // distance of the state from the image of alpha = d^E S
      sim.monitors.push_back({name, [to_dual, alpha](const Vec& s) {
                                const DualPoint pt = to_dual(s);
                                return (pt.p - alpha(pt.x)).cwiseAbs().maxCoeff();
                              }});
    } else {
      throw ConfigError("unknown monitor '" + name + "'");
    }
  }
  return sim;
}

}  // namespace amech
