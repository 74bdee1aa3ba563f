#pragma once

#include <algorithm>
#include <limits>
#include <optional>

#include "amech/hamiltonian.hpp"

namespace amech {

struct LegendreConfig {
  double newton_tol = 1e-12;  // on |dL/dy - p|
  int max_iter = 50;
  double cond_tol = 1e10;
  DiffConfig diff{};
};

/// Leg_L(x, y) = (x, dL/dy(x, y)).
inline DualPoint legendre_map(const LagrangianSystem& sys, const PrimalPoint& pt, const DiffConfig& cfg = {}) {
  if (pt.x.size() != sys.chart.m || pt.y.size() != sys.chart.n) throw ShapeError("legendre_map: point does not match chart");
  return {pt.x, fd_gradient(sys.L, pt.flat(), cfg).tail(sys.chart.n)};
}

namespace detail {
/// Rounding floor of a central-difference gradient, about eps (|L| + |z| |grad L|) / h
/// per component. Zero for an analytic gradient.
inline double gradient_noise(const ScalarField& L, const Vec& z, const Vec& g, const DiffConfig& cfg) {
  if (L.has_grad()) return 0.0;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double scale = std::abs(L(z)) + z.cwiseAbs().maxCoeff() * g.cwiseAbs().maxCoeff();
  return 16.0 * eps * std::sqrt(static_cast<double>(z.size())) * scale / cfg.h;
}
}  // namespace detail

/// Solves dL/dy(x, y) = p for y by Newton's method on the fiber Hessian.
/// The starting guess defaults to p. When L has no analytic gradient the
/// stopping test is max(newton_tol, rounding floor of the FD gradient).
inline PrimalPoint legendre_inverse(const LagrangianSystem& sys, const DualPoint& pt,
                                    const std::optional<Vec>& y_guess = std::nullopt,
                                    const LegendreConfig& cfg = {}) {
  const int m = sys.chart.m, n = sys.chart.n;
  if (pt.x.size() != m || pt.p.size() != n) throw ShapeError("legendre_inverse: point does not match chart");
  if (!(cfg.newton_tol > 0.0) || cfg.max_iter < 1) throw ConfigError("legendre_inverse: invalid configuration");
  Vec y = y_guess.value_or(pt.p);
  if (y.size() != n) throw ShapeError("legendre_inverse: guess has wrong length");

  double res = 0.0;
  for (int it = 0; it <= cfg.max_iter; ++it) {
    const Vec z = join(pt.x, y);
    const Vec g = fd_gradient(sys.L, z, cfg.diff);
    const Vec F = g.tail(n) - pt.p;
    res = F.norm();
    if (!std::isfinite(res)) throw NonFiniteField(-1, "legendre_inverse");
    if (res <= std::max(cfg.newton_tol, detail::gradient_noise(sys.L, z, g, cfg.diff))) return {pt.x, y};
    if (it == cfg.max_iter) break;
    const Mat W = fd_hessian(sys.L, z, cfg.diff).bottomRightCorner(n, n);
    y -= detail::checked_lu(W, cfg.cond_tol).solve(F);
  }
  throw NoConvergence(cfg.max_iter, res);
}

/// H(x, p) = E_L(x, Leg^{-1}(x, p)). Every evaluation runs a fresh Newton solve
/// started from p, so the field is stateless; failures propagate. The gradient
/// is dH/dx = -dL/dx(x, y), dH/dp = y at y = Leg^{-1}(x, p).
inline HamiltonianSystem induced_hamiltonian(const LagrangianSystem& sys, const LegendreConfig& cfg = {}) {
  const int m = sys.chart.m;
  ScalarField H{sys.chart.m + sys.chart.n,
                [sys, cfg, m](const Vec& z) {
                  const DualPoint pt = DualPoint::split(z, m);
                  const PrimalPoint q = legendre_inverse(sys, pt, std::nullopt, cfg);
                  return q.y.dot(pt.p) - sys.L(q.flat());
                },
                [sys, cfg, m](const Vec& z) {
                  const DualPoint pt = DualPoint::split(z, m);
                  const PrimalPoint q = legendre_inverse(sys, pt, std::nullopt, cfg);
                  return Vec(join(-fd_gradient(sys.L, q.flat(), cfg.diff).head(m), q.y));
                }};
  return {sys.chart, std::move(H)};
}

/// Prolonged Legendre map:
///   (x, y; z, v) -> (x, dL/dy; z, w),  w_a = rho^i_b z^b d2L/dx^i dy^a + v^b d2L/dy^a dy^b.
inline ProlPointEstar lleg_map(const LagrangianSystem& sys, const ProlPointE& pt, const DiffConfig& cfg = {}) {
  const PrimalPoint base{pt.x, pt.y};
  const LagrangianJet jet = lagrangian_jet(sys, base, cfg);
  const Mat rho = sys.chart.anchor(pt.x);
  const Vec w = jet.Mxy.transpose() * (rho * pt.z) + jet.W * pt.v;
  return {pt.x, jet.dLdy, pt.z, w};
}

/// omega_L pulled back from the canonical symplectic section through the
/// frame Jacobian of lleg_map: J^T Omega(Leg(pt)) J with J = [[I, 0], [K, W]],
/// K(a, b) = rho^i_b d2L/dx^i dy^a.
inline Mat pulled_back_symplectic(const LagrangianSystem& sys, const PrimalPoint& pt, const DiffConfig& cfg = {}) {
  const int n = sys.chart.n;
  const LagrangianJet jet = lagrangian_jet(sys, pt, cfg);
  const Mat rho = sys.chart.anchor(pt.x);
  Mat J = Mat::Zero(2 * n, 2 * n);
  J.topLeftCorner(n, n) = Mat::Identity(n, n);
  J.bottomLeftCorner(n, n) = jet.Mxy.transpose() * rho;
  J.bottomRightCorner(n, n) = jet.W;
  const Mat O = canonical_symplectic(sys.chart, {pt.x, jet.dLdy});
  return J.transpose() * O * J;
}

/// | LLeg(xi_L(pt)) - xi_H(Leg(pt)) | in frame coefficients, with H the
/// induced Hamiltonian. Zero when the two sections are Legendre-related.
inline double relatedness_defect(const LagrangianSystem& sys, const PrimalPoint& pt, const LegendreConfig& cfg = {}) {
  const PhaseVelocity el = el_vector_field(sys, pt, cfg.cond_tol, cfg.diff);
  const ProlPointEstar lhs = lleg_map(sys, {pt.x, pt.y, pt.y, el.fiber_dot}, cfg.diff);
  const HamiltonianSystem hs = induced_hamiltonian(sys, cfg);
  const ProlPointEstar rhs = hamilton_section(hs, legendre_map(sys, pt, cfg.diff), cfg.diff);
  return std::sqrt((lhs.z - rhs.z).squaredNorm() + (lhs.v - rhs.v).squaredNorm() + (lhs.p - rhs.p).squaredNorm());
}

}  // namespace amech
