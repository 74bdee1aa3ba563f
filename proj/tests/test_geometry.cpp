#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "amech/integrate.hpp"
#include "amech/models.hpp"
#include "amech/random_fields.hpp"
#include "amech/tulczyjew.hpp"

using namespace amech;
using Catch::Matchers::WithinAbs;

namespace {

Vec vec(std::initializer_list<double> v) {
  Vec out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

template <typename Derived>
double maxabs(const Eigen::MatrixBase<Derived>& v) {
  return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

Vec random_vec(int n, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Vec v(n);
  for (int k = 0; k < n; ++k) v[k] = u(rng);
  return v;
}

PrincipalData abelian_magnetic(double B0) {
  PrincipalData pd;
  pd.m = 2;
  pd.ng = 1;
  pd.c = Tensor3(1, 1, 1);
  pd.A = models::abelian_magnetic_connection(B0);
  return pd;
}

PrincipalData flat_product(int m, const Tensor3& c) {
  PrincipalData pd;
  pd.m = m;
  pd.ng = c.dim0();
  pd.c = c;
  const int ng = pd.ng;
  pd.A = MatrixField{m, [ng, m](const Vec&) { return Mat(Mat::Zero(ng, m)); }};
  return pd;
}

}  // namespace

TEST_CASE("canonical involution examples", "[tulczyjew]") {
  const ProlPointE pt{vec({0.3, 0.1}), vec({1, 2}), vec({-1, 4}), vec({0.5, 0.25})};
  const ProlPointE s = sigma(standard_chart(2), pt);
  CHECK(s.y == pt.z);
  CHECK(s.z == pt.y);
  CHECK(s.v == pt.v);

  const ProlPointE r = sigma(so3_chart(), {vec({0.0}), vec({1, 0, 0}), vec({0, 1, 0}), vec({0, 0, 0})});
  CHECK(r.y == vec({0, 1, 0}));
  CHECK(r.z == vec({1, 0, 0}));
  CHECK(r.v == vec({0, 0, -1}));

  const ProlPointE fixed{vec({0.0}), vec({1, 2, 3}), vec({1, 2, 3}), vec({4, 5, 6})};
  const ProlPointE f = sigma(so3_chart(), fixed);
  CHECK(f.y == fixed.y);
  CHECK(f.z == fixed.z);
  CHECK(f.v == fixed.v);
}

TEST_CASE("sigma is an involution that swaps the projections", "[tulczyjew][property]") {
  std::mt19937_64 rng(31);
  for (const std::string& name : models::builtin_names()) {
    const Model md = *models::builtin(name);
    const int m = md.chart.m, n = md.chart.n;
    for (int k = 0; k < 25; ++k) {
      const ProlPointE pt{random_vec(m, rng), random_vec(n, rng, 2.0), random_vec(n, rng, 2.0), random_vec(n, rng, 2.0)};
      const ProlPointE s = sigma(md.chart, pt);
      const ProlPointE ss = sigma(md.chart, s);
      CHECK(s.x == pt.x);
      CHECK(s.y == pt.z);
      CHECK(maxabs(ss.v - pt.v) <= 1e-14);
      CHECK(ss.y == pt.y);
      CHECK(ss.z == pt.z);
    }
  }
}

TEST_CASE("Tulczyjew maps", "[tulczyjew]") {
  const ProlPointEstar pt{vec({0.3, 0.1}), vec({1, 2}), vec({-1, 4}), vec({0.5, 0.25})};
  const ProlCovector a = a_map(standard_chart(2), pt);
  CHECK(a.x == pt.x);
  CHECK(a.fiber == pt.z);
  CHECK(a.first == pt.v);
  CHECK(a.second == pt.p);
  const ProlCovector f = flat_map(standard_chart(2), pt);
  CHECK(f.fiber == pt.p);
  CHECK(f.first == -pt.v);
  CHECK(f.second == pt.z);

  const ProlPointEstar so{vec({0.0}), vec({0, 0, 1}), vec({1, 0, 0}), vec({0, 0, 0})};
  const ProlCovector as = a_map(so3_chart(), so);
  CHECK(as.first == vec({0, -1, 0}));
  CHECK(as.second == vec({0, 0, 1}));
  const ProlCovector fs = flat_map(so3_chart(), so);
  CHECK(fs.first == vec({0, 1, 0}));
  CHECK(fs.second == vec({1, 0, 0}));

  const ProlPointEstar z0{vec({0.0}), vec({3, 1, 2}), vec({0, 0, 0}), vec({7, 8, 9})};
  const ProlCovector az = a_map(so3_chart(), z0);
  CHECK(az.first == z0.v);
  CHECK(az.second == z0.p);

  CHECK_THROWS_AS(a_map(so3_chart(), {vec({0.0}), vec({1, 2}), vec({1, 2, 3}), vec({1, 2, 3})}), ShapeError);
}

TEST_CASE("Tulczyjew maps invert and cover the right base points", "[tulczyjew][property]") {
  std::mt19937_64 rng(37);
  for (const std::string& name : models::builtin_names()) {
    const Model md = *models::builtin(name);
    const int m = md.chart.m, n = md.chart.n;
    for (int k = 0; k < 20; ++k) {
      const ProlPointEstar pt{random_vec(m, rng), random_vec(n, rng, 2.0), random_vec(n, rng, 2.0), random_vec(n, rng, 2.0)};
      const ProlCovector a = a_map(md.chart, pt);
      CHECK(a.x == pt.x);
      CHECK(a.fiber == pt.z);
      const ProlPointEstar ai = a_map_inverse(md.chart, a);
      CHECK(maxabs(ai.v - pt.v) <= 1e-14);
      CHECK(ai.p == pt.p);
      const ProlCovector f = flat_map(md.chart, pt);
      CHECK(f.x == pt.x);
      CHECK(f.fiber == pt.p);
      const ProlPointEstar fi = flat_map_inverse(md.chart, f);
      CHECK(maxabs(fi.v - pt.v) <= 1e-14);
      CHECK(fi.z == pt.z);
    }
  }
}

TEST_CASE("the flat map sends the Hamiltonian section to dH", "[tulczyjew]") {
  const Model md = models::atiyah_so3();
  const DualPoint pt{vec({0.2, -0.3}), vec({0.5, 1.0, -0.4, 0.3, 0.9})};
  const ProlCovector f = flat_map(md.chart, hamilton_section(*md.hamiltonian, pt));
  const Vec g = fd_gradient(md.hamiltonian->H, pt.flat());
  // flat(xi_H) = d^{T^E E*} H: (rho^T dH/dx, dH/dp)
  CHECK(maxabs(f.first - md.chart.anchor(pt.x).transpose() * g.head(2)) <= 1e-12);
  CHECK(maxabs(f.second - g.tail(5)) <= 1e-12);
}

TEST_CASE("S_L residuals", "[tulczyjew]") {
  const Model md = models::atiyah_so3();
  const ProlPointEstar s = sl_point(*md.lagrangian, {vec({0.4, 0.1}), vec({0.3, -0.5, 1.0, 0.2, -0.7})});
  for (double r : sL_residual(*md.lagrangian, s)) CHECK(r <= 1e-10);

  const LagrangianSystem free2 = quadratic_lagrangian(standard_chart(2), Mat::Identity(2, 2));
  ProlPointEstar pt{vec({0.3, 0.6}), vec({1, 0}), vec({1, 0}), vec({0, 0})};
  for (double r : sL_residual(free2, pt)) CHECK(r == 0.0);
  pt.v[1] = 0.125;
  CHECK_THAT(sL_residual(free2, pt)[2], WithinAbs(0.125, 1e-15));
}

TEST_CASE("S_H residuals", "[tulczyjew]") {
  const Model md = models::atiyah_so3();
  const DualPoint pt{vec({0.4, 0.1}), vec({0.3, -0.5, 1.0, 0.2, -0.7})};
  const auto r = sH_residual(*md.hamiltonian, hamilton_section(*md.hamiltonian, pt));
  CHECK(r[0] <= 1e-12);
  CHECK(r[1] <= 1e-12);

  const HamiltonianSystem free2 = quadratic_hamiltonian(standard_chart(2), Mat::Identity(2, 2));
  const auto z = sH_residual(free2, {vec({0.3, 0.6}), vec({1, 2}), vec({1, 2}), vec({0, 0})});
  CHECK(z[0] == 0.0);
  CHECK(z[1] == 0.0);
  CHECK(sH_residual(free2, {vec({0.3, 0.6}), vec({1, 2}), vec({1, 2}), vec({0, 1})})[1] == 1.0);
}

TEST_CASE("S_L equals S_H for hyperregular Lagrangians", "[tulczyjew][property]") {
  const Model md = models::so3_rigid_body();
  const HamiltonianSystem hs = induced_hamiltonian(*md.lagrangian);
  std::mt19937_64 rng(41);
  for (int k = 0; k < 100; ++k) {
    const Vec x = random_vec(1, rng);
    const ProlPointEstar sl = sl_point(*md.lagrangian, {x, random_vec(3, rng, 2.0)});
    const auto rh = sH_residual(hs, sl);
    CHECK(std::max(rh[0], rh[1]) <= 1e-6);
    const ProlPointEstar sh = hamilton_section(hs, {x, random_vec(3, rng, 2.0)});
    const auto rl = sL_residual(*md.lagrangian, sh);
    CHECK(std::max({rl[0], rl[1], rl[2]}) <= 1e-6);
  }
}

TEST_CASE("admissible curves in S_H are Hamilton solutions", "[tulczyjew]") {
  const Model md = models::so3_rigid_body();
  const HamiltonianSystem hs = *md.hamiltonian;
  const double dt = 1e-3;
  const StateField f = [hs](const Vec& s) { return hamilton_vector_field(hs, DualPoint::split(s, 1)).flat(); };
  const Trajectory tr = rk4_integrate(f, vec({0.0, 0.5, 1.0, -0.8}), {dt, 1.0, "rk4-classic"});
  double worst = 0.0;
  for (std::size_t k = 1; k + 1 < tr.size(); ++k) {
    const Vec pdot = (tr.states[k + 1].tail(3) - tr.states[k - 1].tail(3)) / (2.0 * dt);
    const ProlPointEstar xi = hamilton_section(hs, DualPoint::split(tr.states[k], 1));
    worst = std::max(worst, maxabs(xi.v - pdot));
  }
  CHECK(worst <= 10.0 * dt * dt);
}

TEST_CASE("curvature examples", "[atiyah]") {
  PrincipalData constant = flat_product(2, Tensor3(1, 1, 1));
  constant.A = MatrixField{2, [](const Vec&) { return Mat(Mat::Constant(1, 2, 0.7)); }};
  CHECK(curvature(constant, vec({0.3, 0.1})).max_abs() == 0.0);

  const Tensor3 B = curvature(abelian_magnetic(1.5), vec({0.2, -0.4}));
  CHECK_THAT(B(0, 0, 1), WithinAbs(-1.5, 1e-9));
  CHECK_THAT(B(0, 1, 0), WithinAbs(1.5, 1e-9));

  CHECK(curvature(flat_product(2, so3_structure_constants()), vec({0.3, 0.1})).max_abs() == 0.0);

  const Model at = models::atiyah_so3();
  const Tensor3 Bs = curvature(*at.principal, vec({0.3, -0.2}));
  for (int c = 0; c < 3; ++c) {
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) CHECK(std::abs(Bs(c, i, j) + Bs(c, j, i)) <= 1e-15);
    }
  }
}

TEST_CASE("principal data validation", "[atiyah]") {
  PrincipalData pd = flat_product(2, so3_structure_constants());
  CHECK_NOTHROW(validate_principal(pd));
  pd.c(0, 1, 2) = 2.0;
  CHECK_THROWS_AS(validate_principal(pd), ShapeError);
  CHECK_THROWS_AS(atiyah_chart(pd), ShapeError);
  PrincipalData wrong = flat_product(2, so3_structure_constants());
  wrong.c = Tensor3(2, 2, 2);
  CHECK_THROWS_AS(validate_principal(wrong), ShapeError);
}

TEST_CASE("Atiyah chart blocks", "[atiyah]") {
  const AlgebroidChart prod = atiyah_chart(flat_product(2, Tensor3(2, 2, 2)));
  CHECK(prod.n == 4);
  CHECK(prod.structure(vec({0.5, 0.5})).max_abs() == 0.0);
  Mat rho = Mat::Zero(2, 4);
  rho.leftCols(2) = Mat::Identity(2, 2);
  CHECK(prod.anchor(vec({0.1, 0.2})) == rho);

  const Tensor3 C = atiyah_chart(abelian_magnetic(1.5)).structure(vec({0.2, -0.4}));
  CHECK_THAT(C(2, 0, 1), WithinAbs(1.5, 1e-9));
  CHECK_THAT(C(2, 1, 0), WithinAbs(-1.5, 1e-9));
  double others = 0.0;
  for (int g = 0; g < 3; ++g) {
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        if (g == 2 && a != b && a < 2 && b < 2) continue;
        others = std::max(others, std::abs(C(g, a, b)));
      }
    }
  }
  CHECK(others == 0.0);
}

TEST_CASE("Atiyah charts satisfy the structure equations", "[atiyah][property]") {
  const Model at = models::atiyah_so3();
  CHECK(validate_structure(at.chart, uniform_points(at.base_box, 50, 13), 1e-6).pass);

  // constant nonabelian connection: every term is polynomial, so the residual is tiny
  PrincipalData pd = flat_product(2, so3_structure_constants());
  pd.A = MatrixField{2, [](const Vec&) {
                       Mat A(3, 2);
                       A << 0.3, -0.5, 1.1, 0.2, -0.7, 0.4;
                       return A;
                     }};
  const StructureReport r = validate_structure(atiyah_chart(pd), uniform_points(Box::cube(2, 1.0), 20, 3), 1e-6);
  CHECK(r.pass);
  CHECK(r.jacobi_residual <= 1e-12);

  PrincipalData rot = flat_product(3, so3_structure_constants());
  rot.A = models::smooth_connection(3, 3, 0.6);
  CHECK(validate_structure(atiyah_chart(rot), uniform_points(Box::cube(3, 1.0), 50, 17), 1e-6).pass);
}

TEST_CASE("Hamilton-Poincare equations match the generic Hamilton field", "[atiyah]") {
  const Model at = models::atiyah_so3();
  const PrincipalData& pd = *at.principal;
  std::mt19937_64 rng(43);
  const ScalarField h = random_smooth_function(7, rng);
  const HamiltonianSystem generic{at.chart, h};
  double worst = 0.0;
  for (const Vec& z : uniform_points(Box::cube(7, 1.0), 100, 47)) {
    const DualPoint pt = DualPoint::split(z, 2);
    worst = std::max(worst, maxabs(hp_rhs(pd, h, pt).flat() - hamilton_vector_field(generic, pt).flat()));
  }
  CHECK(worst <= 1e-10);

  const PrincipalData ab = abelian_magnetic(1.0);
  const ScalarField ha = random_smooth_function(5, rng);
  for (const Vec& z : uniform_points(Box::cube(5, 1.0), 10, 5)) CHECK(hp_rhs(ab, ha, DualPoint::split(z, 2)).fiber_dot[2] == 0.0);

  const PrincipalData free = flat_product(2, Tensor3(1, 1, 1));
  const HamiltonianSystem kin = quadratic_hamiltonian(atiyah_chart(free), Mat::Identity(3, 3));
  const PhaseVelocity v = hp_rhs(free, kin.H, {vec({0.1, 0.2}), vec({1.0, -2.0, 0.5})});
  CHECK(maxabs(v.xdot - vec({1.0, -2.0})) == 0.0);
  CHECK(maxabs(v.fiber_dot) == 0.0);
}

TEST_CASE("Hamilton-Poincare flow tracks the generic flow", "[atiyah][property]") {
  const Model at = models::atiyah_so3();
  const PrincipalData pd = *at.principal;
  const HamiltonianSystem hs = *at.hamiltonian;
  const StateField generic = [hs](const Vec& s) { return hamilton_vector_field(hs, DualPoint::split(s, 2)).flat(); };
  const StateField explicit_hp = [pd, hs](const Vec& s) { return hp_rhs(pd, hs.H, DualPoint::split(s, 2)).flat(); };
  const Vec s0 = vec({0.1, -0.2, 0.4, 0.3, 0.5, -0.6, 0.8});
  const IntegratorConfig cfg{1e-2, 5.0, "rk4-classic"};
  const Trajectory a = rk4_integrate(generic, s0, cfg);
  const Trajectory b = rk4_integrate(explicit_hp, s0, cfg);
  REQUIRE(a.size() == b.size());
  double sup = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) sup = std::max(sup, maxabs(a.states[k] - b.states[k]));
  CHECK(sup <= 1e-6);
}

TEST_CASE("Lagrange-Poincare equations match the generic Euler-Lagrange field", "[atiyah]") {
  const Model at = models::atiyah_so3();
  for (const Vec& z : uniform_points(Box::cube(7, 1.0), 30, 53)) {
    const LagrangePoincare lp = lp_rhs(*at.principal, at.lagrangian->L, PrimalPoint::split(z, 2));
    CHECK(lp.residual_base <= 1e-8);
    CHECK(lp.residual_algebra <= 1e-8);
  }

  // a non-quadratic reduced Lagrangian exercises every term
  std::mt19937_64 rng(59);
  const ScalarField pert = random_smooth_function(7, rng);
  const ScalarField l{7, [base = at.lagrangian->L, pert](const Vec& z) { return base(z) + 0.05 * pert(z); }, {}};
  for (const Vec& z : uniform_points(Box::cube(7, 1.0), 10, 61)) {
    const LagrangePoincare lp = lp_rhs(*at.principal, l, PrimalPoint::split(z, 2));
    CHECK(lp.residual_base <= 1e-6);
    CHECK(lp.residual_algebra <= 1e-6);
  }

  const PrincipalData ab = flat_product(2, Tensor3(2, 2, 2));
  const ScalarField labelian = random_smooth_function(6, rng);
  const Vec r = lp_momentum_rates(ab, labelian, {vec({0.1, 0.2}), vec({0.3, 0.4, 0.5, 0.6})});
  CHECK(maxabs(r.tail(2)) == 0.0);
}

TEST_CASE("locked velocity and metrics", "[atiyah]") {
  const WongData id{Mat::Identity(3, 3), models::smooth_base_metric()};
  const Vec pbar = vec({0.3, -1.0, 2.0});
  CHECK(maxabs(locked_velocity(id, pbar) - pbar) == 0.0);
  WongData scaled{2.0 * Mat::Identity(3, 3), models::smooth_base_metric()};
  CHECK(maxabs(locked_velocity(scaled, pbar) - 0.5 * pbar) <= 1e-15);

  const Tensor3 c = so3_structure_constants();
  CHECK(bi_invariance_defect(c, Mat::Identity(3, 3)) == 0.0);
  CHECK(bi_invariance_defect(c, Mat(vec({1.0, 2.0, 3.0}).asDiagonal())) > 0.5);
  CHECK(bi_invariance_defect(Tensor3(2, 2, 2), Mat(vec({1.0, 5.0}).asDiagonal())) == 0.0);

  const PrincipalData pd = flat_product(2, c);
  const std::vector<Vec> pts{vec({0.0, 0.0})};
  CHECK_THROWS_AS(wong_system(pd, {Mat(vec({1.0, 2.0, 3.0}).asDiagonal()), models::smooth_base_metric()}, pts),
                  InvalidMetric);
  CHECK_THROWS_AS(wong_system(pd, {-Mat::Identity(3, 3), models::smooth_base_metric()}, pts), InvalidMetric);
  const MatrixField indefinite{2, [](const Vec&) { return Mat(vec({1.0, -1.0}).asDiagonal()); }};
  CHECK_THROWS_AS(wong_system(pd, {Mat::Identity(3, 3), indefinite}, pts), InvalidMetric);
  CHECK_NOTHROW(wong_system(pd, id, pts));
}

TEST_CASE("Wong equations match the Hamilton flow of h", "[atiyah]") {
  for (const std::string& name : {std::string("atiyah-so3"), std::string("wong-abelian")}) {
    const Model md = *models::builtin(name);
    const int dim = 2 * md.chart.m + md.principal->ng;
    double worst = 0.0;
    for (const Vec& z : uniform_points(Box::cube(dim, 1.0), 50, 67)) {
      const DualPoint pt = DualPoint::split(z, md.chart.m);
      worst = std::max(worst, maxabs(wong_rhs(*md.principal, *md.wong, pt).flat() -
                                     hamilton_vector_field(*md.hamiltonian, pt).flat()));
    }
    INFO(name);
    CHECK(worst <= 1e-8);
  }
}

TEST_CASE("Wong conservation laws", "[atiyah][property]") {
  const Model ab = models::wong_abelian();
  const PrincipalData pd = *ab.principal;
  const WongData wd = *ab.wong;
  const StateField wf = [pd, wd](const Vec& s) { return wong_rhs(pd, wd, DualPoint::split(s, 2)).flat(); };
  const Trajectory tr = rk4_integrate(wf, vec({0.0, 0.0, 1.0, 0.0, 2.0}), {1e-3, 3.0, "rk4-classic"},
                                      {{"pbar", [](const Vec& s) { return s[4]; }}});
  CHECK(drift(tr, "pbar").max_abs <= 1e-12);

  const Model at = models::atiyah_so3();
  const HamiltonianSystem hs = *at.hamiltonian;
  const auto casimir = at.casimirs.at("pbar-norm");
  const StateField hf = [hs](const Vec& s) { return hamilton_vector_field(hs, DualPoint::split(s, 2)).flat(); };
  const Trajectory tn = rk4_integrate(hf, vec({0.1, -0.2, 0.4, 0.3, 0.5, -0.6, 0.8}), {1e-2, 5.0, "rk4-classic"},
                                      {{"k", [casimir](const Vec& s) { return casimir(DualPoint::split(s, 2)); }}});
  CHECK(drift(tn, "k").max_abs <= 1e-8);
}
