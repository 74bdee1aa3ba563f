#pragma once

#include <limits>
#include <vector>

#include "amech/algebroid.hpp"

namespace amech {

/// Point (x, y) of the algebroid E.
struct PrimalPoint {
  Vec x;
  Vec y;

  Vec flat() const { return join(x, y); }
  static PrimalPoint split(const Vec& z, int m) { return {z.head(m), z.tail(z.size() - m)}; }
};

/// Velocity of a phase-space curve split into base and fiber blocks.
struct PhaseVelocity {
  Vec xdot;
  Vec fiber_dot;

  Vec flat() const { return join(xdot, fiber_dot); }
};

/// A chart together with a Lagrangian L(x, y) defined on the (m+n)-space.
struct LagrangianSystem {
  AlgebroidChart chart;
  ScalarField L;
};

/// First and second derivatives of L at a point.
struct LagrangianJet {
  double value = 0.0;
  Vec dLdx;   // m
  Vec dLdy;   // n
  Mat W;      // n x n, d2L/dy dy
  Mat Mxy;    // m x n, d2L/dx^i dy^b
};

inline LagrangianJet lagrangian_jet(const LagrangianSystem& sys, const PrimalPoint& pt, const DiffConfig& cfg = {}) {
  const int m = sys.chart.m, n = sys.chart.n;
  if (sys.L.dim != m + n) throw ShapeError("Lagrangian must be defined on the (m+n)-space");
  if (pt.x.size() != m || pt.y.size() != n) throw ShapeError("point does not match chart dimensions");
  const Vec z = pt.flat();
  LagrangianJet jet;
  jet.value = sys.L(z);
  if (!std::isfinite(jet.value)) throw NonFiniteField(-1, "Lagrangian");
  const Vec g = fd_gradient(sys.L, z, cfg);
  jet.dLdx = g.head(m);
  jet.dLdy = g.tail(n);
  const Mat H = fd_hessian(sys.L, z, cfg);
  jet.W = H.bottomRightCorner(n, n);
  jet.Mxy = H.topRightCorner(m, n);
  return jet;
}

namespace detail {

/// Dense LU with partial pivoting; throws SingularHessian if the reciprocal
/// condition estimate says cond(W) > cond_tol. A zero pivot counts as infinite
/// condition (Eigen's estimate is meaningless once U is singular).
inline Eigen::PartialPivLU<Mat> checked_lu(const Mat& W, double cond_tol) {
  Eigen::PartialPivLU<Mat> lu(W);
  const double min_pivot = W.size() == 0 ? 1.0 : lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  const double rcond = min_pivot > 0.0 ? lu.rcond() : 0.0;
  const double cond = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
  if (!(cond <= cond_tol) || !std::isfinite(cond)) throw SingularHessian(cond);
  return lu;
}

}  // namespace detail

struct CartanData {
  Vec theta;     // dL/dy
  Mat omega;     // 2n x 2n in the frame (T_1..T_n, V_1..V_n)
  double energy = 0.0;
  Mat W;
};

/// Poincare-Cartan coefficients and the energy at pt:
///   omega(T_a, V_b) = W_ab,  omega(V_a, V_b) = 0,
///   omega(T_a, T_b) = dL/dy^g C^g_{ab} - (rho^i_a d2L/dx^i dy^b - rho^i_b d2L/dx^i dy^a).
inline CartanData cartan_data(const LagrangianSystem& sys, const PrimalPoint& pt, const DiffConfig& cfg = {}) {
  const int n = sys.chart.n;
  const LagrangianJet jet = lagrangian_jet(sys, pt, cfg);
  const Mat rho = sys.chart.anchor(pt.x);
  const Tensor3 C = sys.chart.structure(pt.x);
  const Mat K = rho.transpose() * jet.Mxy;  // K(a, b) = rho^i_a d2L/dx^i dy^b

  CartanData out;
  out.theta = jet.dLdy;
  out.energy = pt.y.dot(jet.dLdy) - jet.value;
  out.W = jet.W;
  out.omega = Mat::Zero(2 * n, 2 * n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      double ct = 0.0;
      for (int g = 0; g < n; ++g) ct += jet.dLdy[g] * C(g, a, b);
      out.omega(a, b) = ct - (K(a, b) - K(b, a));
    }
  }
  out.omega.topRightCorner(n, n) = jet.W;
  out.omega.bottomLeftCorner(n, n) = -jet.W.transpose();
  return out;
}

inline double lagrangian_energy(const LagrangianSystem& sys, const PrimalPoint& pt, const DiffConfig& cfg = {}) {
  const Vec z = pt.flat();
  const Vec g = fd_gradient(sys.L, z, cfg);
  return pt.y.dot(g.tail(sys.chart.n)) - sys.L(z);
}

inline bool is_regular(const LagrangianSystem& sys, const PrimalPoint& pt, double cond_tol = 1e10,
                       const DiffConfig& cfg = {}) {
  const LagrangianJet jet = lagrangian_jet(sys, pt, cfg);
  try {
    detail::checked_lu(jet.W, cond_tol);
  } catch (const SingularHessian&) {
    return false;
  }
  return true;
}

/// Euler-Lagrange section in coordinates:
///   xdot^i = rho^i_a y^a
///   ydot^a = W^{ab} (rho^i_b dL/dx^i - rho^i_g y^g d2L/dx^i dy^b + y^g C^v_{gb} dL/dy^v)
inline PhaseVelocity el_vector_field(const LagrangianSystem& sys, const PrimalPoint& pt, double cond_tol = 1e10,
                                     const DiffConfig& cfg = {}) {
  const int n = sys.chart.n;
  const LagrangianJet jet = lagrangian_jet(sys, pt, cfg);
  const Mat rho = sys.chart.anchor(pt.x);
  const Tensor3 C = sys.chart.structure(pt.x);
  const Vec xdot = rho * pt.y;

  Vec rhs = rho.transpose() * jet.dLdx - jet.Mxy.transpose() * xdot;
  for (int b = 0; b < n; ++b) {
    double s = 0.0;
    for (int g = 0; g < n; ++g) {
      if (pt.y[g] == 0.0) continue;
      for (int v = 0; v < n; ++v) s += pt.y[g] * C(v, g, b) * jet.dLdy[v];
    }
    rhs[b] += s;
  }
  const auto lu = detail::checked_lu(jet.W, cond_tol);
  return {xdot, lu.solve(rhs)};
}

/// One sample of a curve in E.
struct CurveSample {
  double t = 0.0;
  Vec x;
  Vec y;
};

/// Per-sample residuals of a discretely sampled curve; the first and last
/// samples have no central difference and are not included.
struct ResidualSeries {
  std::vector<double> base;
  std::vector<double> fiber;
  double max_base = 0.0;
  double max_fiber = 0.0;
};

/// Residuals of the Euler-Lagrange equations along samples, with time
/// derivatives of x and of dL/dy taken by central differences:
///   dx/dt - rho y,   d/dt(dL/dy_a) - (rho^i_a dL/dx^i - C^g_{ab} y^b dL/dy^g).
inline ResidualSeries el_residual(const LagrangianSystem& sys, const std::vector<CurveSample>& samples,
                                  const DiffConfig& cfg = {}) {
  if (samples.size() < 3) throw ShapeError("el_residual: at least three samples are required");
  const int m = sys.chart.m, n = sys.chart.n;
  std::vector<Vec> theta;
  theta.reserve(samples.size());
  for (const auto& s : samples) theta.push_back(fd_gradient(sys.L, join(s.x, s.y), cfg).tail(n));

  ResidualSeries out;
  for (std::size_t k = 1; k + 1 < samples.size(); ++k) {
    const auto& s = samples[k];
    const double dt2 = samples[k + 1].t - samples[k - 1].t;
    const Vec g = fd_gradient(sys.L, join(s.x, s.y), cfg);
    const Mat rho = sys.chart.anchor(s.x);
    const Tensor3 C = sys.chart.structure(s.x);

    const Vec xdot = (samples[k + 1].x - samples[k - 1].x) / dt2;
    const Vec thdot = (theta[k + 1] - theta[k - 1]) / dt2;
    Vec rhs = rho.transpose() * g.head(m);
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        for (int gg = 0; gg < n; ++gg) rhs[a] -= C(gg, a, b) * s.y[b] * g[m + gg];
      }
    }
    const double rb = (xdot - rho * s.y).norm();
    const double rf = (thdot - rhs).norm();
    out.base.push_back(rb);
    out.fiber.push_back(rf);
    out.max_base = std::max(out.max_base, rb);
    out.max_fiber = std::max(out.max_fiber, rf);
  }
  return out;
}

}  // namespace amech
