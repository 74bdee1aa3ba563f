#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "amech/atiyah.hpp"
#include "amech/hamilton_jacobi.hpp"

namespace amech {

/// Everything the CLI and the acceptance suite need to know about a model.
struct Model {
  std::string name;
  AlgebroidChart chart;
  std::optional<LagrangianSystem> lagrangian;
  std::optional<HamiltonianSystem> hamiltonian;
  std::optional<PrincipalData> principal;
  std::optional<WongData> wong;
  /// S on the base with H(x, d^E S(x)) = const; enables the hj-residual monitor.
  std::optional<ScalarField> hj_generator;
  /// Named functions on E* that should be conserved by the Hamiltonian flow.
  std::map<std::string, std::function<double(const DualPoint&)>> casimirs;
  Box base_box;
  double fiber_scale = 1.0;

  Box fiber_box() const { return Box::cube(chart.n, fiber_scale); }
};

/// L = 1/2 y^T K y and H = 1/2 p^T K^{-1} p with exact gradients.
inline LagrangianSystem quadratic_lagrangian(const AlgebroidChart& chart, const Mat& K) {
  const int m = chart.m, n = chart.n;
  ScalarField L{m + n, [K, m, n](const Vec& z) { return 0.5 * z.tail(n).dot(K * z.tail(n)); },
                [K, m, n](const Vec& z) {
                  Vec g = Vec::Zero(m + n);
                  g.tail(n) = 0.5 * (K + K.transpose()) * z.tail(n);
                  return g;
                }};
  return {chart, std::move(L)};
}

inline HamiltonianSystem quadratic_hamiltonian(const AlgebroidChart& chart, const Mat& K) {
  const int m = chart.m, n = chart.n;
  const Mat Kinv = K.inverse();
  ScalarField H{m + n, [Kinv, n](const Vec& z) { return 0.5 * z.tail(n).dot(Kinv * z.tail(n)); },
                [Kinv, m, n](const Vec& z) {
                  Vec g = Vec::Zero(m + n);
                  g.tail(n) = 0.5 * (Kinv + Kinv.transpose()) * z.tail(n);
                  return g;
                }};
  return {chart, std::move(H)};
}

namespace models {

/// Planar isotropic oscillator on the tangent bundle of R^2.
inline Model euclid_sho() {
  Model md;
  md.name = "euclid-sho";
  md.chart = standard_chart(2);
  md.chart.label = "euclid-sho";
  ScalarField L{4, [](const Vec& z) { return 0.5 * z.tail(2).squaredNorm() - 0.5 * z.head(2).squaredNorm(); },
                [](const Vec& z) { return Vec(join(-z.head(2), z.tail(2))); }};
  ScalarField H{4, [](const Vec& z) { return 0.5 * z.tail(2).squaredNorm() + 0.5 * z.head(2).squaredNorm(); },
                [](const Vec& z) { return Vec(z); }};
  md.lagrangian = LagrangianSystem{md.chart, L};
  md.hamiltonian = HamiltonianSystem{md.chart, H};
  md.base_box = Box::cube(2, 1.0);
  return md;
}

inline Vec rigid_body_inertia() { return Vec::LinSpaced(3, 1.0, 3.0); }

/// Free rigid body on so(3)* with principal moments (1, 2, 3).
inline Model so3_rigid_body() {
  Model md;
  md.name = "so3-rigid-body";
  md.chart = so3_chart();
  const Mat I = rigid_body_inertia().asDiagonal();
  md.lagrangian = quadratic_lagrangian(md.chart, I);
  md.hamiltonian = quadratic_hamiltonian(md.chart, I);
  md.casimirs["so3-norm"] = [](const DualPoint& pt) { return pt.p.squaredNorm(); };
  md.base_box = Box::cube(1, 1.0);
  return md;
}

/// Connection of the abelian magnetic example: A^1 = (0, B0 x^1).
inline MatrixField abelian_magnetic_connection(double B0) {
  return MatrixField{2, [B0](const Vec& x) {
                       Mat A = Mat::Zero(1, 2);
                       A(0, 1) = B0 * x[0];
                       return A;
                     }};
}

/// A smooth, non-flat connection with every entry depending on both base
/// coordinates; used for nonabelian structure checks.
inline MatrixField smooth_connection(int ng, int m, double amplitude) {
  return MatrixField{m, [ng, m, amplitude](const Vec& x) {
                       Mat A(ng, m);
                       for (int a = 0; a < ng; ++a) {
                         for (int i = 0; i < m; ++i) {
                           double phase = 0.3 * a - 0.2 * i;
                           for (int j = 0; j < m; ++j) phase += (1.0 + 0.5 * ((a + i + j) % 3)) * 0.7 * x[j];
                           A(a, i) = amplitude * (std::sin(phase) + 0.25 * x[i] * x[(i + 1) % m]);
                         }
                       }
                       return A;
                     }};
}

/// Base metric used by atiyah-so3: SPD for every x.
inline MatrixField smooth_base_metric() {
  return MatrixField{2, [](const Vec& x) {
                       Mat g(2, 2);
                       g(0, 0) = 1.5 + 0.3 * std::sin(x[0]);
                       g(1, 1) = 1.2 + 0.2 * x[0] * x[0] / (1.0 + x[0] * x[0]);
                       g(0, 1) = g(1, 0) = 0.2 * std::cos(x[1]);
                       return g;
                     }};
}

inline Model from_wong(std::string name, PrincipalData pd, WongData wd, const Box& box) {
  Model md;
  md.name = std::move(name);
  const auto [ls, hs] = wong_system(pd, wd, halton_points(box, 20));
  md.chart = ls.chart;
  md.chart.label = md.name;
  md.lagrangian = LagrangianSystem{md.chart, ls.L};
  md.hamiltonian = HamiltonianSystem{md.chart, hs.H};
  const int m = pd.m, ng = pd.ng;
  const Mat kinv = wd.kappa.inverse();
  md.casimirs["pbar-norm"] = [kinv, m, ng](const DualPoint& pt) {
    const Vec pb = pt.p.segment(m, ng);
    return pb.dot(kinv * pb);
  };
  md.principal = std::move(pd);
  md.wong = std::move(wd);
  md.base_box = box;
  return md;
}

/// Charged particle in the plane in a uniform field B0 = 1 (abelian Wong system).
inline Model wong_abelian() {
  PrincipalData pd;
  pd.m = 2;
  pd.ng = 1;
  pd.c = Tensor3(1, 1, 1);
  pd.A = abelian_magnetic_connection(1.0);
  pd.label = "u1-magnetic";
  WongData wd{Mat::Identity(1, 1), MatrixField{2, [](const Vec&) { return Mat(Mat::Identity(2, 2)); }}};
  return from_wong("wong-abelian", std::move(pd), std::move(wd), Box::cube(2, 1.0));
}

/// SO(3) bundle over R^2 with a smooth nonabelian connection.
inline Model atiyah_so3() {
  PrincipalData pd;
  pd.m = 2;
  pd.ng = 3;
  pd.c = so3_structure_constants();
  pd.A = smooth_connection(3, 2, 0.4);
  pd.label = "so3-smooth";
  WongData wd{Mat::Identity(3, 3), smooth_base_metric()};
  return from_wong("atiyah-so3", std::move(pd), std::move(wd), Box::cube(2, 1.0));
}

/// Free particle on the line with constant potential -1/2; S(x) = x solves
/// the Hamilton-Jacobi equation at level zero.
inline Model euclid_hj() {
  Model md;
  md.name = "euclid-hj";
  md.chart = standard_chart(1);
  md.chart.label = "euclid-hj";
  ScalarField L{2, [](const Vec& z) { return 0.5 * z[1] * z[1] + 0.5; },
                [](const Vec& z) { return Vec(Eigen::Vector2d(0.0, z[1])); }};
  ScalarField H{2, [](const Vec& z) { return 0.5 * z[1] * z[1] - 0.5; },
                [](const Vec& z) { return Vec(Eigen::Vector2d(0.0, z[1])); }};
  md.lagrangian = LagrangianSystem{md.chart, L};
  md.hamiltonian = HamiltonianSystem{md.chart, H};
  md.hj_generator = ScalarField{1, [](const Vec& x) { return x[0]; }, [](const Vec&) { return Vec(Vec::Ones(1)); }};
  md.base_box = Box::cube(1, 1.0);
  return md;
}

inline std::vector<std::string> builtin_names() {
  return {"euclid-sho", "so3-rigid-body", "wong-abelian", "atiyah-so3", "euclid-hj"};
}

/// Returns nullopt for an unknown name.
inline std::optional<Model> builtin(const std::string& name) {
  if (name == "euclid-sho") return euclid_sho();
  if (name == "so3-rigid-body" || name == "so3") return so3_rigid_body();
  if (name == "wong-abelian") return wong_abelian();
  if (name == "atiyah-so3") return atiyah_so3();
  if (name == "euclid-hj") return euclid_hj();
  return std::nullopt;
}

}  // namespace models
}  // namespace amech
