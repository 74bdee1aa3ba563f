#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "amech/dual_poisson.hpp"
#include "amech/random_fields.hpp"
#include "amech/scenario.hpp"
#include "amech/tulczyjew.hpp"

namespace amech {

enum ExitCode : int { kPass = 0, kFail = 1, kBadInput = 2, kNonFinite = 3 };

struct CommandOptions {
  std::string model;
  std::string config;
  std::string out;
  int points = 50;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
};

/// Shortest round-trip text for a double, independent of the C locale.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

inline void write_csv(std::ostream& os, const Trajectory& traj, int m, int n, bool momentum) {
  os << 't';
  for (int i = 1; i <= m; ++i) os << ",x" << i;
  for (int a = 1; a <= n; ++a) os << ',' << (momentum ? 'p' : 'y') << a;
  for (const auto& name : traj.monitor_order) os << ',' << name;
  os << '\n';
  for (std::size_t k = 0; k < traj.size(); ++k) {
    os << format_double(traj.times[k]);
    for (Eigen::Index i = 0; i < traj.states[k].size(); ++i) os << ',' << format_double(traj.states[k][i]);
    for (const auto& name : traj.monitor_order) os << ',' << format_double(traj.monitors.at(name)[k]);
    os << '\n';
  }
}

namespace detail {

inline std::vector<Vec> sample_box(const Box& box, int count, std::optional<std::uint64_t> seed) {
  return seed ? uniform_points(box, count, *seed) : halton_points(box, count);
}

inline Box product_box(const Box& a, const Box& b) { return {join(a.lo, b.lo), join(a.hi, b.hi)}; }

/// Running maxima for a check report.
struct Maxima {
  Json values = Json::object();
  void update(const std::string& key, double v) {
    if (!std::isfinite(v)) v = std::numeric_limits<double>::infinity();
    if (!values.contains(key) || values[key].get<double>() < v) values[key] = v;
  }
  double worst() const {
    double w = 0.0;
    for (const auto& [k, v] : values.items()) w = std::max(w, v.get<double>());
    return w;
  }
};

inline void require_regular(const LagrangianSystem& sys, const std::vector<Vec>& pts, int m) {
  for (const Vec& z : pts) {
    if (!is_regular(sys, PrimalPoint::split(z, m))) throw PreconditionFailed("Lagrangian is not regular on the sample box");
  }
}

}  // namespace detail

inline int cmd_validate(const CommandOptions& opt, std::ostream& out) {
  const Model md = resolve_model(opt.model);
  const double tol = opt.tol.value_or(1e-6);
  if (opt.points < 1) throw ConfigError("--points must be positive");
  const StructureReport r = validate_structure(md.chart, detail::sample_box(md.base_box, opt.points, opt.seed), tol);
  Json j;
  j["model"] = md.name;
  j["m"] = md.chart.m;
  j["n"] = md.chart.n;
  j["samples"] = r.samples;
  j["tol"] = r.tol;
  j["antisymmetry"] = r.antisymmetry;
  j["anchor_residual"] = r.anchor_residual;
  j["jacobi_residual"] = r.jacobi_residual;
  j["pass"] = r.pass;
  out << j.dump(2) << '\n';
  return r.pass ? kPass : kFail;
}

inline int cmd_simulate(const CommandOptions& opt, std::ostream& out) {
  if (opt.config.empty()) throw ConfigError("simulate needs --config");
  if (opt.out.empty()) throw ConfigError("simulate needs --out");
  Scenario sc = load_scenario(opt.config);
  if (!opt.model.empty()) sc.model = opt.model;
  const Model md = resolve_model(sc.model);
  const Simulation sim = build_simulation(md, sc);
  const Trajectory traj = rk4_integrate(sim.field, sc.initial_state, sc.integrator, sim.monitors);

  std::ofstream csv(opt.out);
  if (!csv) throw ConfigError("cannot write '" + opt.out + "'");
  write_csv(csv, traj, sim.m, sim.n, sim.momentum_coordinates);

  Json side;
  side["model"] = md.name;
  side["dynamics"] = sc.dynamics;
  side["rows"] = traj.size();
  side["t_final"] = traj.size() ? traj.times.back() : 0.0;
  side["truncated"] = traj.truncated;
  if (traj.truncated) side["error"] = traj.error;
  Json drifts = Json::object();
  for (const auto& name : traj.monitor_order) {
    const Drift d = drift(traj, name);
    drifts[name] = {{"max_abs", d.max_abs}, {"relative", d.relative}};
  }
  side["drift"] = drifts;
  std::ofstream js(opt.out + ".json");
  if (!js) throw ConfigError("cannot write '" + opt.out + ".json'");
  js << side.dump(2) << '\n';
  out << side.dump(2) << '\n';
  return traj.truncated ? kNonFinite : kPass;
}

inline std::vector<std::string> check_names() {
  return {"involution", "triple", "legendre", "sl-eq-sh", "hp-lp", "poisson"};
}

inline double default_check_tol(const std::string& name) {
  if (name == "involution") return 1e-14;
  if (name == "triple") return 1e-12;
  if (name == "hp-lp") return 1e-8;
  return 1e-6;
}

/// Runs one cross-check at N sampled points and reports the maxima.
inline int cmd_check(const std::string& name, const CommandOptions& opt, std::ostream& out) {
  const Model md = resolve_model(opt.model);
  if (opt.points < 1) throw ConfigError("--points must be positive");
  const double tol = opt.tol.value_or(default_check_tol(name));
  const int m = md.chart.m, n = md.chart.n, N = opt.points;
  const std::uint64_t seed = opt.seed.value_or(1);
  const Box phase = detail::product_box(md.base_box, md.fiber_box());
  const std::vector<Vec> pts = uniform_points(phase, N, seed);
  const std::vector<Vec> extra = uniform_points(Box::cube(2 * n, md.fiber_scale), N, seed + 1);
  detail::Maxima mx;
  std::optional<double> jacobi;  // poisson only; fixed tolerance for the nested FD pass
  constexpr double jacobi_tol = 1e-4;

  if (name == "involution") {
    for (int k = 0; k < N; ++k) {
      const ProlPointE P{pts[k].head(m), pts[k].tail(n), extra[k].head(n), extra[k].tail(n)};
      const ProlPointE S = sigma(md.chart, P);
      const ProlPointE SS = sigma(md.chart, S);
      mx.update("sigma_sigma", std::max({(SS.x - P.x).cwiseAbs().maxCoeff(), (SS.y - P.y).cwiseAbs().maxCoeff(),
                                         (SS.z - P.z).cwiseAbs().maxCoeff(), (SS.v - P.v).cwiseAbs().maxCoeff()}));
      mx.update("projection_swap", std::max((S.y - P.z).cwiseAbs().maxCoeff(), (S.z - P.y).cwiseAbs().maxCoeff()));
    }
  } else if (name == "triple") {
    for (int k = 0; k < N; ++k) {
      const ProlPointEstar P{pts[k].head(m), pts[k].tail(n), extra[k].head(n), extra[k].tail(n)};
      const ProlCovector a = a_map(md.chart, P);
      const ProlPointEstar ai = a_map_inverse(md.chart, a);
      const ProlCovector f = flat_map(md.chart, P);
      const ProlPointEstar fi = flat_map_inverse(md.chart, f);
      auto dist = [](const ProlPointEstar& u, const ProlPointEstar& w) {
        return std::max({(u.x - w.x).cwiseAbs().maxCoeff(), (u.p - w.p).cwiseAbs().maxCoeff(),
                         (u.z - w.z).cwiseAbs().maxCoeff(), (u.v - w.v).cwiseAbs().maxCoeff()});
      };
      mx.update("a_round_trip", dist(ai, P));
      mx.update("flat_round_trip", dist(fi, P));
      // A_E covers (x, p; z) -> (x, z) and flat covers the identity of E*
      mx.update("base_maps", std::max({(a.fiber - P.z).cwiseAbs().maxCoeff(), (f.fiber - P.p).cwiseAbs().maxCoeff(),
                                       (a.x - P.x).cwiseAbs().maxCoeff(), (f.x - P.x).cwiseAbs().maxCoeff()}));
      if (md.hamiltonian) {
        // flat(xi_H) = dH
        const DualPoint q{P.x, P.p};
        const ProlCovector fx = flat_map(md.chart, hamilton_section(*md.hamiltonian, q));
        const Vec g = fd_gradient(md.hamiltonian->H, q.flat());
        const Mat rho = md.chart.anchor(P.x);
        mx.update("flat_xi_H", std::max((fx.first - rho.transpose() * g.head(m)).cwiseAbs().maxCoeff(),
                                        (fx.second - g.tail(n)).cwiseAbs().maxCoeff()));
      }
    }
  } else if (name == "legendre") {
    if (!md.lagrangian) throw PreconditionFailed("model '" + md.name + "' has no Lagrangian");
    const LagrangianSystem& sys = *md.lagrangian;
    detail::require_regular(sys, pts, m);
    for (int k = 0; k < N; ++k) {
      const PrimalPoint q = PrimalPoint::split(pts[k], m);
      mx.update("relatedness", relatedness_defect(sys, q));
      const PrimalPoint back = legendre_inverse(sys, legendre_map(sys, q));
      mx.update("inverse_round_trip", (back.y - q.y).norm());
    }
  } else if (name == "sl-eq-sh" || name == "sl-sh") {
    if (!md.lagrangian) throw PreconditionFailed("model '" + md.name + "' has no Lagrangian");
    const LagrangianSystem& sys = *md.lagrangian;
    detail::require_regular(sys, pts, m);
    const HamiltonianSystem hs = induced_hamiltonian(sys);
    for (int k = 0; k < N; ++k) {
      const PrimalPoint q = PrimalPoint::split(pts[k], m);
      const auto rh = sH_residual(hs, sl_point(sys, q));
      mx.update("S_L_in_S_H", std::max(rh[0], rh[1]));
      const DualPoint d = legendre_map(sys, q);
      const auto rl = sL_residual(sys, hamilton_section(hs, d));
      mx.update("S_H_in_S_L", std::max({rl[0], rl[1], rl[2]}));
    }
  } else if (name == "hp-lp") {
    if (!md.principal || !md.lagrangian || !md.hamiltonian) {
      throw PreconditionFailed("model '" + md.name + "' has no reduced Lagrangian and Hamiltonian");
    }
    const PrincipalData& pd = *md.principal;
    for (int k = 0; k < N; ++k) {
      const DualPoint d = DualPoint::split(pts[k], m);
      const PhaseVelocity gen = hamilton_vector_field(*md.hamiltonian, d);
      const PhaseVelocity hp = hp_rhs(pd, md.hamiltonian->H, d);
      mx.update("hamilton_poincare", (gen.flat() - hp.flat()).norm());
      const LagrangePoincare lp = lp_rhs(pd, md.lagrangian->L, PrimalPoint::split(pts[k], m));
      mx.update("lagrange_poincare", std::max(lp.residual_base, lp.residual_algebra));
      if (md.wong) mx.update("wong", (gen.flat() - wong_rhs(pd, *md.wong, d).flat()).norm());
    }
  } else if (name == "poisson") {
    std::mt19937_64 rng(seed + 2);
    jacobi = 0.0;
    for (int k = 0; k < N; ++k) {
      const DualPoint d = DualPoint::split(pts[k], m);
      const ScalarField F = random_smooth_function(m + n, rng);
      const ScalarField G = random_smooth_function(m + n, rng);
      const ProlPointEstar xf = hamilton_section({md.chart, F}, d);
      const ProlPointEstar xg = hamilton_section({md.chart, G}, d);
      const double omega = join(xf.z, xf.v).dot(canonical_symplectic(md.chart, d) * join(xg.z, xg.v));
      mx.update("bracket_vs_omega", std::abs(poisson_bracket(md.chart, F, G, d) + omega));
      const ScalarField H = random_smooth_function(m + n, rng);
      jacobi = std::max(*jacobi, jacobi_defect(md.chart, F, G, H, d));
    }
  } else {
    throw ConfigError("unknown check '" + name + "'");
  }

  Json rep;
  rep["check"] = name;
  rep["model"] = md.name;
  rep["points"] = N;
  rep["tol"] = tol;
  rep["max"] = mx.values;
  bool pass = mx.worst() <= tol;
  if (jacobi) {
    rep["jacobi_defect"] = *jacobi;
    rep["jacobi_tol"] = jacobi_tol;
    pass = pass && *jacobi <= jacobi_tol;
  }
  rep["pass"] = pass;
  out << rep.dump(2) << '\n';
  return pass ? kPass : kFail;
}

/// Maps engine errors to CLI exit codes around a command body.
template <class Fn>
int run_guarded(Fn&& body, std::ostream& err) {
  try {
    return body();
  } catch (const NoConvergence& e) {
    err << "error: " << e.what() << '\n';
    return kFail;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const Json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kBadInput;
  }
}

}  // namespace amech
