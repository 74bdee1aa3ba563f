#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "amech/fields.hpp"
#include "amech/sampling.hpp"

namespace amech {

/// Constant structure data, kept alongside the callables so the chart can be
/// written back out as JSON.
struct ConstantChartData {
  Mat rho;     // m x n
  Tensor3 C;   // n x n x n, C(gamma, alpha, beta)
};

/// One coordinate chart of a rank-n Lie algebroid over an m-dimensional base.
///
/// `rho(x)` is the m x n anchor matrix rho^i_alpha and `C(x)` the structure
/// tensor indexed C(gamma, alpha, beta) = C^gamma_{alpha beta}. A Lie algebra
/// is represented with a single dummy base coordinate and rho = 0.
struct AlgebroidChart {
  int m = 0;
  int n = 0;
  MatrixField rho;
  TensorField C;
  std::string label;
  std::optional<ConstantChartData> constant;

  Mat anchor(const Vec& x) const {
    Mat r = rho(x);
    if (r.rows() != m || r.cols() != n) throw ShapeError("anchor has wrong shape in chart '" + label + "'");
    if (!r.allFinite()) throw NonFiniteField(-1, "anchor");
    return r;
  }
  Tensor3 structure(const Vec& x) const {
    Tensor3 c = C(x);
    if (c.dim0() != n || c.dim1() != n || c.dim2() != n) {
      throw ShapeError("structure tensor has wrong shape in chart '" + label + "'");
    }
    if (!all_finite(c)) throw NonFiniteField(-1, "structure tensor");
    return c;
  }
};

inline AlgebroidChart make_constant_chart(Mat rho, Tensor3 C, std::string label) {
  const int m = static_cast<int>(rho.rows());
  const int n = static_cast<int>(rho.cols());
  if (C.dim0() != n || C.dim1() != n || C.dim2() != n) throw ShapeError("structure tensor must be n x n x n");
  AlgebroidChart chart;
  chart.m = m;
  chart.n = n;
  chart.rho = MatrixField{m, [rho](const Vec&) { return rho; }};
  chart.C = TensorField{m, [C](const Vec&) { return C; }};
  chart.label = std::move(label);
  chart.constant = ConstantChartData{std::move(rho), std::move(C)};
  return chart;
}

/// The tangent bundle chart: rho = identity, C = 0.
inline AlgebroidChart standard_chart(int dim) {
  return make_constant_chart(Mat::Identity(dim, dim), Tensor3(dim, dim, dim), "standard-R" + std::to_string(dim));
}

/// A Lie algebra as an algebroid over a point (one dummy base coordinate).
inline AlgebroidChart lie_algebra_chart(const Tensor3& c, std::string label) {
  return make_constant_chart(Mat::Zero(1, c.dim0()), c, std::move(label));
}

inline AlgebroidChart so3_chart() { return lie_algebra_chart(so3_structure_constants(), "so3"); }

struct StructureReport {
  double antisymmetry = 0.0;
  double anchor_residual = 0.0;  // rho-compatibility equation
  double jacobi_residual = 0.0;  // cyclic equation for C
  int samples = 0;
  double tol = 0.0;
  bool pass = false;
};

/// Residuals of the two structure equations at one point.
///
/// anchor:  rho^j_a d_j rho^i_b - rho^j_b d_j rho^i_a - rho^i_g C^g_{ab}
/// jacobi:  sum_cyclic(a,b,g) [rho^i_a d_i C^v_{bg} + C^v_{am} C^m_{bg}]
///
/// Derivatives of rho use step h; derivatives of C use h_second because C is
/// often itself a finite-difference quantity (e.g. a curvature).
inline StructureReport structure_residuals_at(const AlgebroidChart& chart, const Vec& x,
                                              const DiffConfig& cfg = {}) {
  detail::require_dim(chart.m, x, "validate_structure");
  const int m = chart.m, n = chart.n;
  const Mat rho = chart.anchor(x);
  const Tensor3 C = chart.structure(x);
  const auto drho = fd_partials([&](const Vec& z) { return chart.anchor(z); }, x, cfg.h);
  const auto dC = fd_partials([&](const Vec& z) { return chart.structure(z); }, x, cfg.h_second);

  StructureReport r;
  r.samples = 1;
  for (int g = 0; g < n; ++g) {
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) r.antisymmetry = std::max(r.antisymmetry, std::abs(C(g, a, b) + C(g, b, a)));
    }
  }

  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int i = 0; i < m; ++i) {
        double res = 0.0;
        for (int j = 0; j < m; ++j) {
          res += rho(j, a) * drho[static_cast<std::size_t>(j)](i, b) - rho(j, b) * drho[static_cast<std::size_t>(j)](i, a);
        }
        for (int g = 0; g < n; ++g) res -= rho(i, g) * C(g, a, b);
        r.anchor_residual = std::max(r.anchor_residual, std::abs(res));
      }
    }
  }

  auto term = [&](int v, int a, int b, int g) {
    double t = 0.0;
    for (int i = 0; i < m; ++i) t += rho(i, a) * dC[static_cast<std::size_t>(i)](v, b, g);
    for (int mu = 0; mu < n; ++mu) t += C(v, a, mu) * C(mu, b, g);
    return t;
  };
  for (int v = 0; v < n; ++v) {
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        for (int g = 0; g < n; ++g) {
          const double res = term(v, a, b, g) + term(v, b, g, a) + term(v, g, a, b);
          r.jacobi_residual = std::max(r.jacobi_residual, std::abs(res));
        }
      }
    }
  }
  return r;
}

inline StructureReport validate_structure(const AlgebroidChart& chart, const std::vector<Vec>& sample_points,
                                          double tol = 1e-6, const DiffConfig& cfg = {}) {
  if (sample_points.empty()) throw ShapeError("validate_structure: no sample points");
  StructureReport total;
  for (const Vec& x : sample_points) {
    const StructureReport r = structure_residuals_at(chart, x, cfg);
    total.antisymmetry = std::max(total.antisymmetry, r.antisymmetry);
    total.anchor_residual = std::max(total.anchor_residual, r.anchor_residual);
    total.jacobi_residual = std::max(total.jacobi_residual, r.jacobi_residual);
  }
  total.samples = static_cast<int>(sample_points.size());
  total.tol = tol;
  total.pass = total.antisymmetry <= tol && total.anchor_residual <= tol && total.jacobi_residual <= tol;
  return total;
}

/// Default sampling: `count` Halton points in `box`.
inline StructureReport validate_structure(const AlgebroidChart& chart, const Box& box, int count = 50,
                                          double tol = 1e-6, const DiffConfig& cfg = {}) {
  return validate_structure(chart, halton_points(box, count), tol, cfg);
}

/// (d^E f)_a = rho^i_a df/dx^i.
inline Vec dE_function(const AlgebroidChart& chart, const ScalarField& f, const Vec& x, const DiffConfig& cfg = {}) {
  if (f.dim != chart.m) throw ShapeError("dE_function: function must be defined on the base");
  return chart.anchor(x).transpose() * fd_gradient(f, x, cfg);
}

/// Coefficients (d^E theta)(e_b, e_g) = rho^i_b d_i theta_g - rho^i_g d_i theta_b - theta_a C^a_{bg}.
inline Mat dE_oneform(const AlgebroidChart& chart, const VectorField& theta, const Vec& x, const DiffConfig& cfg = {}) {
  if (theta.dim != chart.m) throw ShapeError("dE_oneform: section must be defined on the base");
  const Vec th = theta(x);
  if (th.size() != chart.n) throw ShapeError("dE_oneform: section must have n components");
  const Mat rho = chart.anchor(x);
  const Tensor3 C = chart.structure(x);
  const Mat J = fd_jacobian(theta, x, cfg);  // J(g, i) = d theta_g / dx^i
  const Mat D = J * rho;                     // D(g, b) = rho^i_b d_i theta_g
  Mat out = D.transpose() - D;
  for (int b = 0; b < chart.n; ++b) {
    for (int g = 0; g < chart.n; ++g) {
      for (int a = 0; a < chart.n; ++a) out(b, g) -= th[a] * C(a, b, g);
    }
  }
  return out;
}

/// [X, Y]^g = rho^i_a X^a d_i Y^g - rho^i_b Y^b d_i X^g + C^g_{ab} X^a Y^b.
inline Vec bracket_sections(const AlgebroidChart& chart, const VectorField& X, const VectorField& Y, const Vec& x,
                            const DiffConfig& cfg = {}) {
  if (X.dim != chart.m || Y.dim != chart.m) throw ShapeError("bracket_sections: sections must be defined on the base");
  const Vec xv = X(x), yv = Y(x);
  if (xv.size() != chart.n || yv.size() != chart.n) throw ShapeError("bracket_sections: sections must have n components");
  const Mat rho = chart.anchor(x);
  const Tensor3 C = chart.structure(x);
  Vec out = fd_jacobian(Y, x, cfg) * (rho * xv) - fd_jacobian(X, x, cfg) * (rho * yv);
  for (int g = 0; g < chart.n; ++g) {
    for (int a = 0; a < chart.n; ++a) {
      for (int b = 0; b < chart.n; ++b) out[g] += C(g, a, b) * xv[a] * yv[b];
    }
  }
  return out;
}

}  // namespace amech
