#pragma once

#include "amech/legendre.hpp"

namespace amech {

/// The two hypotheses of the Hamilton-Jacobi theorem, kept separate so a
/// caller can tell "not a cocycle" from "not a solution".
struct HjResidual {
  Mat cocycle_defect;  // d^E alpha, n x n antisymmetric
  Vec hj_defect;       // d^E (H o alpha), n-covector
};

/// The base function x -> H(x, alpha(x)).
inline ScalarField compose_with_section(const ScalarField& H, const VectorField& alpha, int m) {
  return ScalarField{m, [H, alpha](const Vec& x) { return H(join(x, alpha(x))); }, {}};
}

inline HjResidual hj_residual(const AlgebroidChart& chart, const ScalarField& H, const VectorField& alpha,
                              const Vec& x, const DiffConfig& cfg = {}) {
  if (alpha.dim != chart.m) throw ShapeError("hj_residual: alpha must be defined on the base");
  if (alpha(x).size() != chart.n) throw ShapeError("hj_residual: alpha must have n components");
  if (H.dim != chart.m + chart.n) throw ShapeError("hj_residual: H must be defined on the dual bundle");
  return {dE_oneform(chart, alpha, x, cfg), dE_function(chart, compose_with_section(H, alpha, chart.m), x, cfg)};
}

/// The section x -> d^E S(x).
inline VectorField exact_section(const AlgebroidChart& chart, const ScalarField& S, DiffConfig cfg = {}) {
  return make_vector_field(chart.m, [chart, S, cfg](const Vec& x) { return dE_function(chart, S, x, cfg); });
}

/// |d(S o c)/dt - L(gamma)| at x for alpha = d^E S, where gamma = Leg^{-1}(alpha(x))
/// and d(S o c)/dt = gamma^a rho^i_a dS/dx^i. Requires alpha to pass both
/// Hamilton-Jacobi residuals and H(alpha(x)) = 0 within `tol`.
inline double action_rate_defect(const LagrangianSystem& sys, const ScalarField& S, const Vec& x, double tol = 1e-8,
                                 const LegendreConfig& cfg = {}) {
  const AlgebroidChart& chart = sys.chart;
  const VectorField alpha = exact_section(chart, S, cfg.diff);
  const HamiltonianSystem hs = induced_hamiltonian(sys, cfg);

  const HjResidual r = hj_residual(chart, hs.H, alpha, x, cfg.diff);
  const double cocycle = r.cocycle_defect.cwiseAbs().maxCoeff();
  const double hj = r.hj_defect.cwiseAbs().maxCoeff();
  if (cocycle > tol || hj > tol) {
    throw PreconditionFailed("action_rate_defect: d^E S is not a Hamilton-Jacobi solution at x");
  }
  const Vec a = alpha(x);
  const double level = hs.H(join(x, a));
  if (std::abs(level) > tol) {
    throw PreconditionFailed("action_rate_defect: H(d^E S) = " + std::to_string(level) + " is not zero");
  }
  const PrimalPoint gamma = legendre_inverse(sys, {x, a}, std::nullopt, cfg);
  const double rate = gamma.y.dot(a);
  return std::abs(rate - sys.L(gamma.flat()));
}

}  // namespace amech
