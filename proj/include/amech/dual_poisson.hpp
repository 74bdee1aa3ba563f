#pragma once

#include <cmath>

#include "amech/algebroid.hpp"

namespace amech {

/// Point (x, p) of the dual bundle; p are the fiber coordinates y_alpha.
struct DualPoint {
  Vec x;
  Vec p;

  Vec flat() const { return join(x, p); }
  static DualPoint split(const Vec& z, int m) { return {z.head(m), z.tail(z.size() - m)}; }
};

/// Matrix of the linear Poisson bivector in block order (x, p), entry (k, l) = {z_k, z_l}:
///   {x^i, x^j} = 0,  {p_a, x^j} = rho^j_a,  {p_a, p_b} = C^g_{ab} p_g.
inline Mat poisson_bivector(const AlgebroidChart& chart, const DualPoint& pt) {
  detail::require_dim(chart.m, pt.x, "poisson_bivector");
  if (pt.p.size() != chart.n) throw ShapeError("poisson_bivector: momentum must have n components");
  const int m = chart.m, n = chart.n;
  const Mat rho = chart.anchor(pt.x);
  const Tensor3 C = chart.structure(pt.x);
  Mat L = Mat::Zero(m + n, m + n);
  for (int a = 0; a < n; ++a) {
    for (int j = 0; j < m; ++j) {
      L(m + a, j) = rho(j, a);
      L(j, m + a) = -rho(j, a);
    }
  }
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      double s = 0.0;
      for (int g = 0; g < n; ++g) s += C(g, a, b) * pt.p[g];
      L(m + a, m + b) = s;
      L(m + b, m + a) = -s;
    }
  }
  return L;
}

/// {F, G}(pt) = grad F . Lambda(pt) . grad G, with F, G on the (m+n)-space.
inline double poisson_bracket(const AlgebroidChart& chart, const ScalarField& F, const ScalarField& G,
                              const DualPoint& pt, const DiffConfig& cfg = {}) {
  if (F.dim != chart.m + chart.n || G.dim != chart.m + chart.n) {
    throw ShapeError("poisson_bracket: functions must be defined on the dual bundle");
  }
  const Vec z = pt.flat();
  return fd_gradient(F, z, cfg).dot(poisson_bivector(chart, pt) * fd_gradient(G, z, cfg));
}

/// z -> {F, G}(z) as a field, for nesting brackets.
inline ScalarField bracket_field(const AlgebroidChart& chart, ScalarField F, ScalarField G, DiffConfig cfg = {}) {
  const int dim = chart.m + chart.n;
  return ScalarField{dim,
                     [chart, F = std::move(F), G = std::move(G), cfg](const Vec& z) {
                       return poisson_bracket(chart, F, G, DualPoint::split(z, chart.m), cfg);
                     },
                     {}};
}

/// |{F,{G,H}} + {G,{H,F}} + {H,{F,G}}| at pt. The outer brackets differentiate
/// finite-difference brackets, so they use the wider step h_second.
inline double jacobi_defect(const AlgebroidChart& chart, const ScalarField& F, const ScalarField& G,
                            const ScalarField& H, const DualPoint& pt, const DiffConfig& cfg = {}) {
  DiffConfig outer = cfg;
  outer.h = cfg.h_second;
  const double s = poisson_bracket(chart, F, bracket_field(chart, G, H, cfg), pt, outer) +
                   poisson_bracket(chart, G, bracket_field(chart, H, F, cfg), pt, outer) +
                   poisson_bracket(chart, H, bracket_field(chart, F, G, cfg), pt, outer);
  return std::abs(s);
}

}  // namespace amech
