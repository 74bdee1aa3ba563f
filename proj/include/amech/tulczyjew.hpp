#pragma once

#include <array>

#include "amech/hamiltonian.hpp"

namespace amech {

namespace detail {
/// (C^a_{bg} z^b y^g)_a
inline Vec contract_zy(const Tensor3& C, const Vec& z, const Vec& y) {
  const int n = C.dim0();
  Vec out = Vec::Zero(n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (z[b] == 0.0) continue;
      for (int g = 0; g < n; ++g) out[a] += C(a, b, g) * z[b] * y[g];
    }
  }
  return out;
}

/// (C^g_{ab} p_g z^b)_a
inline Vec contract_pz(const Tensor3& C, const Vec& p, const Vec& z) {
  const int n = C.dim0();
  Vec out = Vec::Zero(n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (z[b] == 0.0) continue;
      for (int g = 0; g < n; ++g) out[a] += C(g, a, b) * p[g] * z[b];
    }
  }
  return out;
}

inline void require_prol(const AlgebroidChart& chart, const Vec& x, const Vec& a, const Vec& b, const Vec& c) {
  if (x.size() != chart.m || a.size() != chart.n || b.size() != chart.n || c.size() != chart.n) {
    throw ShapeError("prolongation point does not match chart dimensions");
  }
}
}  // namespace detail

/// Canonical involution: (x, y; z, v) -> (x, z; y, v^a + C^a_{bg} z^b y^g).
inline ProlPointE sigma(const AlgebroidChart& chart, const ProlPointE& pt) {
  detail::require_prol(chart, pt.x, pt.y, pt.z, pt.v);
  const Tensor3 C = chart.structure(pt.x);
  return {pt.x, pt.z, pt.y, pt.v + detail::contract_zy(C, pt.z, pt.y)};
}

/// A_E(x, p; z, v) = (x, z; v_a + C^g_{ab} p_g z^b, p_a).
inline ProlCovector a_map(const AlgebroidChart& chart, const ProlPointEstar& pt) {
  detail::require_prol(chart, pt.x, pt.p, pt.z, pt.v);
  const Tensor3 C = chart.structure(pt.x);
  return {pt.x, pt.z, pt.v + detail::contract_pz(C, pt.p, pt.z), pt.p};
}

inline ProlPointEstar a_map_inverse(const AlgebroidChart& chart, const ProlCovector& c) {
  detail::require_prol(chart, c.x, c.fiber, c.first, c.second);
  const Tensor3 C = chart.structure(c.x);
  return {c.x, c.second, c.fiber, c.first - detail::contract_pz(C, c.second, c.fiber)};
}

/// Flat map of the canonical symplectic section:
/// (x, p; z, v) -> (x, p; -v_a - C^g_{ab} p_g z^b, z^a).
inline ProlCovector flat_map(const AlgebroidChart& chart, const ProlPointEstar& pt) {
  detail::require_prol(chart, pt.x, pt.p, pt.z, pt.v);
  const Tensor3 C = chart.structure(pt.x);
  return {pt.x, pt.p, -pt.v - detail::contract_pz(C, pt.p, pt.z), pt.z};
}

inline ProlPointEstar flat_map_inverse(const AlgebroidChart& chart, const ProlCovector& c) {
  detail::require_prol(chart, c.x, c.fiber, c.first, c.second);
  const Tensor3 C = chart.structure(c.x);
  return {c.x, c.fiber, c.second, -c.first - detail::contract_pz(C, c.fiber, c.second)};
}

/// The point A_E^{-1}(d L(x, y)) of the Lagrangian submanifold S_L.
inline ProlPointEstar sl_point(const LagrangianSystem& sys, const PrimalPoint& pt, const DiffConfig& cfg = {}) {
  const Vec g = fd_gradient(sys.L, pt.flat(), cfg);
  const Mat rho = sys.chart.anchor(pt.x);
  const ProlCovector dL{pt.x, pt.y, rho.transpose() * g.head(sys.chart.m), g.tail(sys.chart.n)};
  return a_map_inverse(sys.chart, dL);
}

/// Residuals of the equations cutting out S_L, with L and its derivatives
/// taken at (x, z):
///   [0] |p_a - dL/dy^a|
///   [1] 0 (the condition z = y is absorbed by evaluating at y := z)
///   [2] |v_a - (rho^i_a dL/dx^i - C^g_{ab} dL/dy^g z^b)|
inline std::array<double, 3> sL_residual(const LagrangianSystem& sys, const ProlPointEstar& pt,
                                         const DiffConfig& cfg = {}) {
  detail::require_prol(sys.chart, pt.x, pt.p, pt.z, pt.v);
  const int m = sys.chart.m, n = sys.chart.n;
  const Vec g = fd_gradient(sys.L, join(pt.x, pt.z), cfg);
  const Vec dLdy = g.tail(n);
  const Mat rho = sys.chart.anchor(pt.x);
  const Tensor3 C = sys.chart.structure(pt.x);
  const Vec vexp = rho.transpose() * g.head(m) - detail::contract_pz(C, dLdy, pt.z);
  return {(pt.p - dLdy).norm(), 0.0, (pt.v - vexp).norm()};
}

/// Residuals of S_H = xi_H(E*):
///   [0] |z^a - dH/dp_a|,  [1] |v_a + C^g_{ab} p_g dH/dp_b + rho^i_a dH/dx^i|
inline std::array<double, 2> sH_residual(const HamiltonianSystem& sys, const ProlPointEstar& pt,
                                         const DiffConfig& cfg = {}) {
  detail::require_prol(sys.chart, pt.x, pt.p, pt.z, pt.v);
  const ProlPointEstar xi = hamilton_section(sys, {pt.x, pt.p}, cfg);
  return {(pt.z - xi.z).norm(), (pt.v - xi.v).norm()};
}

}  // namespace amech
