#pragma once

#include <vector>

#include "amech/dual_poisson.hpp"
#include "amech/lagrangian.hpp"
#include "amech/prolongation.hpp"

namespace amech {

/// A chart together with a Hamiltonian H(x, p) on the (m+n)-space.
struct HamiltonianSystem {
  AlgebroidChart chart;
  ScalarField H;
};

/// Canonical symplectic section in the frame (e~_1..e~_n, e-bar_1..e-bar_n):
///   Omega(e~_a, e-bar_b) = delta_ab,  Omega(e~_a, e~_b) = C^g_{ab} p_g,  Omega(e-bar, e-bar) = 0.
inline Mat canonical_symplectic(const AlgebroidChart& chart, const DualPoint& pt) {
  const int n = chart.n;
  if (pt.p.size() != n) throw ShapeError("canonical_symplectic: momentum must have n components");
  const Tensor3 C = chart.structure(pt.x);
  Mat O = Mat::Zero(2 * n, 2 * n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      double s = 0.0;
      for (int g = 0; g < n; ++g) s += C(g, a, b) * pt.p[g];
      O(a, b) = s;
    }
  }
  O.topRightCorner(n, n) = Mat::Identity(n, n);
  O.bottomLeftCorner(n, n) = -Mat::Identity(n, n);
  return O;
}

namespace detail {
inline Vec hamiltonian_gradient(const HamiltonianSystem& sys, const DualPoint& pt, const DiffConfig& cfg) {
  if (sys.H.dim != sys.chart.m + sys.chart.n) throw ShapeError("Hamiltonian must be defined on the (m+n)-space");
  if (pt.x.size() != sys.chart.m || pt.p.size() != sys.chart.n) {
    throw ShapeError("dual point does not match chart dimensions");
  }
  return fd_gradient(sys.H, pt.flat(), cfg);
}

/// Frame coefficients of the Hamiltonian section from a gradient of H.
inline ProlPointEstar hamilton_section_from_gradient(const AlgebroidChart& chart, const DualPoint& pt, const Vec& g) {
  const int m = chart.m, n = chart.n;
  const Mat rho = chart.anchor(pt.x);
  const Tensor3 C = chart.structure(pt.x);
  const Vec dHdp = g.tail(n);
  Vec v = -(rho.transpose() * g.head(m));
  for (int a = 0; a < n; ++a) {
    double s = 0.0;
    for (int b = 0; b < n; ++b) {
      for (int gg = 0; gg < n; ++gg) s += C(gg, a, b) * pt.p[gg] * dHdp[b];
    }
    v[a] -= s;
  }
  return {pt.x, pt.p, dHdp, v};
}
}  // namespace detail

/// Frame coefficients of xi_H at pt:
///   z^a = dH/dp_a,   v_a = -(C^g_{ab} p_g dH/dp_b + rho^i_a dH/dx^i).
inline ProlPointEstar hamilton_section(const HamiltonianSystem& sys, const DualPoint& pt, const DiffConfig& cfg = {}) {
  return detail::hamilton_section_from_gradient(sys.chart, pt, detail::hamiltonian_gradient(sys, pt, cfg));
}

/// Hamilton equations: xdot = rho dH/dp,  pdot_a = -(C^g_{ab} p_g dH/dp_b + rho^i_a dH/dx^i).
inline PhaseVelocity hamilton_vector_field(const HamiltonianSystem& sys, const DualPoint& pt,
                                           const DiffConfig& cfg = {}) {
  const ProlPointEstar xi = hamilton_section(sys, pt, cfg);
  return {sys.chart.anchor(pt.x) * xi.z, xi.v};
}

/// Residuals of the Hamilton equations along a sampled curve (x(t), p(t)),
/// with time derivatives by central differences.
inline ResidualSeries hamilton_residual(const HamiltonianSystem& sys, const std::vector<CurveSample>& samples,
                                        const DiffConfig& cfg = {}) {
  if (samples.size() < 3) throw ShapeError("hamilton_residual: at least three samples are required");
  ResidualSeries out;
  for (std::size_t k = 1; k + 1 < samples.size(); ++k) {
    const double dt2 = samples[k + 1].t - samples[k - 1].t;
    const PhaseVelocity f = hamilton_vector_field(sys, {samples[k].x, samples[k].y}, cfg);
    const double rb = ((samples[k + 1].x - samples[k - 1].x) / dt2 - f.xdot).norm();
    const double rf = ((samples[k + 1].y - samples[k - 1].y) / dt2 - f.fiber_dot).norm();
    out.base.push_back(rb);
    out.fiber.push_back(rf);
    out.max_base = std::max(out.max_base, rb);
    out.max_fiber = std::max(out.max_fiber, rf);
  }
  return out;
}

/// Derivative of H along the complete lift X^{*c} of a section X:
///   X^a rho^i_a dH/dx^i - (rho^i_a dX^b/dx^i p_b + C^g_{ab} p_g X^b) dH/dp_a.
/// Zero means X generates a symmetry of H.
inline double symmetry_defect(const HamiltonianSystem& sys, const VectorField& X, const DualPoint& pt,
                              const DiffConfig& cfg = {}) {
  const int m = sys.chart.m, n = sys.chart.n;
  if (X.dim != m) throw ShapeError("symmetry_defect: section must be defined on the base");
  const Vec xv = X(pt.x);
  if (xv.size() != n) throw ShapeError("symmetry_defect: section must have n components");
  const Vec g = detail::hamiltonian_gradient(sys, pt, cfg);
  const Mat rho = sys.chart.anchor(pt.x);
  const Tensor3 C = sys.chart.structure(pt.x);
  const Mat JX = fd_jacobian(X, pt.x, cfg);  // JX(b, i) = dX^b/dx^i

  double out = xv.dot(rho.transpose() * g.head(m));
  const Vec liftp = (JX * rho).transpose() * pt.p;  // (rho^i_a dX^b/dx^i p_b)_a
  for (int a = 0; a < n; ++a) {
    double s = liftp[a];
    for (int b = 0; b < n; ++b) {
      for (int gg = 0; gg < n; ++gg) s += C(gg, a, b) * pt.p[gg] * xv[b];
    }
    out -= s * g[m + a];
  }
  return out;
}

/// Linear function X-hat(x, p) = p_a X^a(x).
inline double conserved_momentum(const VectorField& X, const DualPoint& pt) { return pt.p.dot(X(pt.x)); }

}  // namespace amech
