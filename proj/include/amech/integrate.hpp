#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "amech/tensor.hpp"

namespace amech {

using StateField = std::function<Vec(const Vec&)>;

struct Monitor {
  std::string name;
  std::function<double(const Vec&)> eval;
};

struct IntegratorConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  std::string method = "rk4-classic";
};

/// Time-stamped states plus one sampled channel per monitor. If the field or a
/// monitor produced a non-finite value (or threw) mid-run the trajectory stops
/// at the last good state and `truncated` is set.
struct Trajectory {
  std::vector<double> times;
  std::vector<Vec> states;
  std::map<std::string, std::vector<double>> monitors;
  std::vector<std::string> monitor_order;
  bool truncated = false;
  std::string error;

  std::size_t size() const noexcept { return times.size(); }
};

/// Classic fixed-step RK4. Step k lands on t = k*dt; a final shorter step is
/// taken when t_end is not a multiple of dt.
inline Trajectory rk4_integrate(const StateField& field, const Vec& state0, const IntegratorConfig& cfg,
                                const std::vector<Monitor>& monitors = {}) {
  if (!(cfg.dt > 0.0) || !(cfg.t_end > 0.0)) throw ConfigError("rk4_integrate: dt and t_end must be positive");
  if (cfg.method != "rk4-classic") throw ConfigError("rk4_integrate: unsupported method '" + cfg.method + "'");

  Trajectory traj;
  for (const auto& mon : monitors) {
    traj.monitor_order.push_back(mon.name);
    traj.monitors[mon.name];
  }
  auto record = [&](double t, const Vec& s) {
    std::vector<double> values;
    values.reserve(monitors.size());
    for (const auto& mon : monitors) {
      const double v = mon.eval(s);
      if (!std::isfinite(v)) throw NonFiniteField(-1, "monitor '" + mon.name + "'");
      values.push_back(v);
    }
    traj.times.push_back(t);
    traj.states.push_back(s);
    for (std::size_t k = 0; k < monitors.size(); ++k) traj.monitors[monitors[k].name].push_back(values[k]);
  };

  const auto steps = static_cast<long>(std::ceil(cfg.t_end / cfg.dt - 1e-9));
  Vec y = state0;
  try {
    if (!y.allFinite()) throw NonFiniteField(-1, "initial state");
    record(0.0, y);
    for (long k = 1; k <= steps; ++k) {
      const double t0 = static_cast<double>(k - 1) * cfg.dt;
      const double t1 = k == steps ? cfg.t_end : static_cast<double>(k) * cfg.dt;
      const double h = t1 - t0;
      const Vec k1 = field(y);
      const Vec k2 = field(y + 0.5 * h * k1);
      const Vec k3 = field(y + 0.5 * h * k2);
      const Vec k4 = field(y + h * k3);
      Vec next = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      if (!next.allFinite()) throw NonFiniteField(-1, "rk4 state");
      y = std::move(next);
      record(t1, y);
    }
  } catch (const Error& e) {
    traj.truncated = true;
    traj.error = e.what();
  }
  return traj;
}

struct Drift {
  double max_abs = 0.0;   // max_t |c(t) - c(0)|
  double relative = 0.0;  // max_abs / |c(0)|, or max_abs when c(0) == 0
};

inline Drift drift(const Trajectory& traj, const std::string& channel) {
  const auto it = traj.monitors.find(channel);
  if (it == traj.monitors.end()) throw UnknownChannel(channel);
  Drift d;
  if (it->second.empty()) return d;
  const double c0 = it->second.front();
  for (double c : it->second) d.max_abs = std::max(d.max_abs, std::abs(c - c0));
  d.relative = c0 != 0.0 ? d.max_abs / std::abs(c0) : d.max_abs;
  return d;
}

}  // namespace amech
