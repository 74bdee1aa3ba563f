#pragma once

#include <optional>
#include <string>
#include <utility>

#include "amech/hamiltonian.hpp"

namespace amech {

/// Structure constants of a Lie algebra plus a connection in one local
/// trivialization U x G.
///
/// `c(c, a, b)` = c^c_{ab}; `A(x)` is the n_g x m matrix A^a_i(x). If `B` is
/// set it is used as the curvature (layout B(c, i, j)) instead of finite
/// differences of A.
struct PrincipalData {
  int m = 0;
  int ng = 0;
  Tensor3 c;
  MatrixField A;
  std::optional<TensorField> B;
  std::string label = "principal";
};

/// Bi-invariant metric kappa on the algebra and a Riemannian metric g(x) on the base.
struct WongData {
  Mat kappa;
  MatrixField g;
};

/// Largest violation of antisymmetry and of the Jacobi identity of c.
inline double lie_algebra_defect(const Tensor3& c) {
  const int n = c.dim0();
  double worst = 0.0;
  for (int v = 0; v < n; ++v) {
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        worst = std::max(worst, std::abs(c(v, a, b) + c(v, b, a)));
        for (int g = 0; g < n; ++g) {
          double s = 0.0;
          for (int mu = 0; mu < n; ++mu) {
            s += c(v, a, mu) * c(mu, b, g) + c(v, b, mu) * c(mu, g, a) + c(v, g, mu) * c(mu, a, b);
          }
          worst = std::max(worst, std::abs(s));
        }
      }
    }
  }
  return worst;
}

inline void validate_principal(const PrincipalData& pd, double tol = 1e-12) {
  if (pd.m < 1 || pd.ng < 0) throw ShapeError("principal data: invalid dimensions");
  if (pd.c.dim0() != pd.ng || pd.c.dim1() != pd.ng || pd.c.dim2() != pd.ng) {
    throw ShapeError("principal data: structure constants must be n_g x n_g x n_g");
  }
  if (lie_algebra_defect(pd.c) > tol) throw ShapeError("principal data: structure constants are not a Lie algebra");
}

/// B^c_{ij} = dA^c_i/dx^j - dA^c_j/dx^i - c^c_{ab} A^a_i A^b_j.
inline Tensor3 curvature(const PrincipalData& pd, const Vec& x, const DiffConfig& cfg = {}) {
  detail::require_dim(pd.m, x, "curvature");
  if (pd.B) return detail::checked(pd.B->eval(x), -1, "curvature");
  const auto connection = [&](const Vec& z) {
    Mat a = pd.A(z);
    if (a.rows() != pd.ng || a.cols() != pd.m) throw ShapeError("connection must be n_g x m");
    return a;
  };
  const Mat A = detail::checked(connection(x), -1, "connection");
  const auto dA = fd_partials(connection, x, cfg.h);  // dA[j](c, i) = dA^c_i/dx^j
  Tensor3 B(pd.ng, pd.m, pd.m);
  for (int c = 0; c < pd.ng; ++c) {
    for (int i = 0; i < pd.m; ++i) {
      for (int j = 0; j < pd.m; ++j) {
        double s = dA[static_cast<std::size_t>(j)](c, i) - dA[static_cast<std::size_t>(i)](c, j);
        for (int a = 0; a < pd.ng; ++a) {
          for (int b = 0; b < pd.ng; ++b) s -= pd.c(c, a, b) * A(a, i) * A(b, j);
        }
        B(c, i, j) = s;
      }
    }
  }
  return B;
}

/// Atiyah algebroid chart, fiber basis ordered (e'_1..e'_m, e'_{m+1}..e'_{m+n_g}):
///   rho = [I_m | 0],  C^a_{ij} = -B^a_{ij},  C^c_{ia} = -C^c_{ai} = -c^c_{ab} A^b_i,
///   C^c_{ab} = c^c_{ab}, every other block zero.
inline AlgebroidChart atiyah_chart(const PrincipalData& pd, const DiffConfig& cfg = {}) {
  validate_principal(pd);
  const int m = pd.m, ng = pd.ng, n = m + ng;
  AlgebroidChart chart;
  chart.m = m;
  chart.n = n;
  chart.label = "atiyah(" + pd.label + ")";
  Mat rho = Mat::Zero(m, n);
  rho.leftCols(m) = Mat::Identity(m, m);
  chart.rho = MatrixField{m, [rho](const Vec&) { return rho; }};
  chart.C = TensorField{m, [pd, cfg, m, ng, n](const Vec& x) {
                          const Mat A = pd.A(x);
                          const Tensor3 B = curvature(pd, x, cfg);
                          Tensor3 C(n, n, n);
                          for (int a = 0; a < ng; ++a) {
                            for (int i = 0; i < m; ++i) {
                              for (int j = 0; j < m; ++j) C(m + a, i, j) = -B(a, i, j);
                            }
                          }
                          for (int c = 0; c < ng; ++c) {
                            for (int a = 0; a < ng; ++a) {
                              for (int i = 0; i < m; ++i) {
                                double s = 0.0;
                                for (int b = 0; b < ng; ++b) s += pd.c(c, a, b) * A(b, i);
                                C(m + c, i, m + a) = -s;
                                C(m + c, m + a, i) = s;
                              }
                              for (int b = 0; b < ng; ++b) C(m + c, m + a, m + b) = pd.c(c, a, b);
                            }
                          }
                          return C;
                        }};
  return chart;
}

/// Hamilton-Poincare equations written out directly from (A, B, c):
///   xdot^i   = dh/dp_i
///   pdot_i   = -(dh/dx^i - B^a_{ij} pbar_a dh/dp_j + c^a_{bd} A^b_i pbar_a dh/dpbar_d)
///   pbardot_a = -c^c_{ab} A^b_i pbar_c dh/dp_i - c^c_{ab} pbar_c dh/dpbar_b
/// The fiber block of the result is (pdot, pbardot).
inline PhaseVelocity hp_rhs(const PrincipalData& pd, const ScalarField& h, const DualPoint& pt,
                            const DiffConfig& cfg = {}) {
  const int m = pd.m, ng = pd.ng;
  if (pt.x.size() != m || pt.p.size() != m + ng) throw ShapeError("hp_rhs: point must be (x; p, pbar)");
  const Vec grad = fd_gradient(h, pt.flat(), cfg);
  const Vec dhdx = grad.head(m), dhdp = grad.segment(m, m), dhdpb = grad.tail(ng);
  const Vec pbar = pt.p.tail(ng);
  const Mat A = pd.A(pt.x);
  const Tensor3 B = curvature(pd, pt.x, cfg);

  Vec pdot(m), pbdot(ng);
  for (int i = 0; i < m; ++i) {
    double s = dhdx[i];
    for (int a = 0; a < ng; ++a) {
      for (int j = 0; j < m; ++j) s -= B(a, i, j) * pbar[a] * dhdp[j];
      for (int b = 0; b < ng; ++b) {
        for (int d = 0; d < ng; ++d) s += pd.c(a, b, d) * A(b, i) * pbar[a] * dhdpb[d];
      }
    }
    pdot[i] = -s;
  }
  for (int a = 0; a < ng; ++a) {
    double s = 0.0;
    for (int b = 0; b < ng; ++b) {
      for (int c = 0; c < ng; ++c) {
        for (int i = 0; i < m; ++i) s -= pd.c(c, a, b) * A(b, i) * pbar[c] * dhdp[i];
        s -= pd.c(c, a, b) * pbar[c] * dhdpb[b];
      }
    }
    pbdot[a] = s;
  }
  return {dhdp, join(pdot, pbdot)};
}

/// Euler-Lagrange field of l on the Atiyah chart, cross-checked against the
/// Lagrange-Poincare equations written directly from (A, B, c):
///   d/dt(dl/dxdot^j)  = dl/dx^j - dl/dvbar^a (B^a_{ij} xdot^i - c^a_{db} A^b_j vbar^d)
///   d/dt(dl/dvbar^b)  = dl/dvbar^a (c^a_{db} vbar^d + c^a_{db} A^d_i xdot^i)
struct LagrangePoincare {
  PhaseVelocity field;      // generic Euler-Lagrange field on the Atiyah chart
  Vec explicit_rates;       // momentum rates from the displayed equations
  Vec generic_rates;        // Mxy^T xdot + W ydot from the generic field
  double residual_base = 0.0;
  double residual_algebra = 0.0;
};

inline Vec lp_momentum_rates(const PrincipalData& pd, const ScalarField& l, const PrimalPoint& pt,
                             const DiffConfig& cfg = {}) {
  const int m = pd.m, ng = pd.ng;
  if (pt.x.size() != m || pt.y.size() != m + ng) throw ShapeError("lp: point must be (x; xdot, vbar)");
  const Vec grad = fd_gradient(l, pt.flat(), cfg);
  const Vec dldx = grad.head(m), dldvb = grad.tail(ng);
  const Vec xd = pt.y.head(m), vb = pt.y.tail(ng);
  const Mat A = pd.A(pt.x);
  const Tensor3 B = curvature(pd, pt.x, cfg);

  Vec rates(m + ng);
  for (int j = 0; j < m; ++j) {
    double s = dldx[j];
    for (int a = 0; a < ng; ++a) {
      double t = 0.0;
      for (int i = 0; i < m; ++i) t += B(a, i, j) * xd[i];
      for (int d = 0; d < ng; ++d) {
        for (int b = 0; b < ng; ++b) t -= pd.c(a, d, b) * A(b, j) * vb[d];
      }
      s -= dldvb[a] * t;
    }
    rates[j] = s;
  }
  for (int b = 0; b < ng; ++b) {
    double s = 0.0;
    for (int a = 0; a < ng; ++a) {
      double t = 0.0;
      for (int d = 0; d < ng; ++d) {
        t += pd.c(a, d, b) * vb[d];
        for (int i = 0; i < m; ++i) t += pd.c(a, d, b) * A(d, i) * xd[i];
      }
      s += dldvb[a] * t;
    }
    rates[m + b] = s;
  }
  return rates;
}

inline LagrangePoincare lp_rhs(const PrincipalData& pd, const ScalarField& l, const PrimalPoint& pt,
                               double cond_tol = 1e10, const DiffConfig& cfg = {}) {
  const LagrangianSystem sys{atiyah_chart(pd, cfg), l};
  LagrangePoincare out;
  out.field = el_vector_field(sys, pt, cond_tol, cfg);
  const LagrangianJet jet = lagrangian_jet(sys, pt, cfg);
  out.generic_rates = jet.Mxy.transpose() * out.field.xdot + jet.W * out.field.fiber_dot;
  out.explicit_rates = lp_momentum_rates(pd, l, pt, cfg);
  const Vec d = out.generic_rates - out.explicit_rates;
  out.residual_base = d.head(pd.m).norm();
  out.residual_algebra = d.tail(pd.ng).norm();
  return out;
}

/// Locked body angular velocity for the Wong metric: vbar^a = kappa^{ab} pbar_b.
inline Vec locked_velocity(const WongData& wd, const Vec& pbar) {
  if (pbar.size() != wd.kappa.rows()) throw ShapeError("locked_velocity: pbar has wrong length");
  return wd.kappa.ldlt().solve(pbar);
}

namespace detail {
inline bool is_spd(const Mat& S, double tol = 1e-12) {
  if (S.rows() != S.cols() || !S.allFinite()) return false;
  if ((S - S.transpose()).cwiseAbs().maxCoeff() > tol * (1.0 + S.cwiseAbs().maxCoeff())) return false;
  Eigen::LLT<Mat> llt(S);
  return llt.info() == Eigen::Success;
}

inline Mat metric_at(const WongData& wd, int m, const Vec& x) {
  Mat g = wd.g(x);
  if (g.rows() != m || g.cols() != m) throw ShapeError("base metric must be m x m");
  return g;
}
}  // namespace detail

/// Largest violation of ad-invariance of kappa: c^c_{ab} kappa_{cd} + c^c_{ad} kappa_{cb}.
inline double bi_invariance_defect(const Tensor3& c, const Mat& kappa) {
  const int n = c.dim0();
  double worst = 0.0;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int d = 0; d < n; ++d) {
        double s = 0.0;
        for (int k = 0; k < n; ++k) s += c(k, a, b) * kappa(k, d) + c(k, a, d) * kappa(k, b);
        worst = std::max(worst, std::abs(s));
      }
    }
  }
  return worst;
}

/// Throws InvalidMetric unless kappa is SPD and ad-invariant and g is SPD at
/// every sample point.
inline void validate_wong(const PrincipalData& pd, const WongData& wd, const std::vector<Vec>& samples) {
  if (wd.kappa.rows() != pd.ng || wd.kappa.cols() != pd.ng) throw InvalidMetric("kappa must be n_g x n_g");
  if (!detail::is_spd(wd.kappa)) throw InvalidMetric("kappa is not symmetric positive definite");
  if (bi_invariance_defect(pd.c, wd.kappa) > 1e-12) throw InvalidMetric("kappa is not bi-invariant");
  for (const Vec& x : samples) {
    if (!detail::is_spd(detail::metric_at(wd, pd.m, x))) throw InvalidMetric("base metric is not SPD at a sample point");
  }
}

/// Reduced kinetic Lagrangian and Hamiltonian on the Atiyah chart:
///   l = 1/2 (kappa_ab vbar^a vbar^b + g_ij xdot^i xdot^j)
///   h = 1/2 (kappa^ab pbar_a pbar_b + g^ij p_i p_j)
/// Fiber gradients are exact; base gradients difference g(x) (or g(x)^{-1}).
inline std::pair<LagrangianSystem, HamiltonianSystem> wong_system(const PrincipalData& pd, const WongData& wd,
                                                                  const std::vector<Vec>& samples = {},
                                                                  const DiffConfig& cfg = {}) {
  validate_principal(pd);
  std::vector<Vec> pts = samples;
  if (pts.empty()) pts.push_back(Vec::Zero(pd.m));
  validate_wong(pd, wd, pts);

  const int m = pd.m, ng = pd.ng, dim = 2 * m + ng;
  const Mat kappa = wd.kappa;
  const Mat kinv = kappa.inverse();
  const auto g = [wd, m](const Vec& x) { return detail::metric_at(wd, m, x); };
  const auto ginv = [g](const Vec& x) { return Mat(g(x).inverse()); };

  ScalarField l{dim,
                [=](const Vec& z) {
                  const Vec x = z.head(m), xd = z.segment(m, m), vb = z.tail(ng);
                  return 0.5 * (vb.dot(kappa * vb) + xd.dot(g(x) * xd));
                },
                [=](const Vec& z) {
                  const Vec x = z.head(m), xd = z.segment(m, m), vb = z.tail(ng);
                  const auto dg = fd_partials(g, x, cfg.h);
                  Vec out(dim);
                  for (int i = 0; i < m; ++i) out[i] = 0.5 * xd.dot(dg[static_cast<std::size_t>(i)] * xd);
                  out.segment(m, m) = g(x) * xd;
                  out.tail(ng) = kappa * vb;
                  return out;
                }};
  ScalarField h{dim,
                [=](const Vec& z) {
                  const Vec x = z.head(m), p = z.segment(m, m), pb = z.tail(ng);
                  return 0.5 * (pb.dot(kinv * pb) + p.dot(ginv(x) * p));
                },
                [=](const Vec& z) {
                  const Vec x = z.head(m), p = z.segment(m, m), pb = z.tail(ng);
                  const auto dgi = fd_partials(ginv, x, cfg.h);
                  Vec out(dim);
                  for (int i = 0; i < m; ++i) out[i] = 0.5 * p.dot(dgi[static_cast<std::size_t>(i)] * p);
                  out.segment(m, m) = ginv(x) * p;
                  out.tail(ng) = kinv * pb;
                  return out;
                }};
  const AlgebroidChart chart = atiyah_chart(pd, cfg);
  return {LagrangianSystem{chart, std::move(l)}, HamiltonianSystem{chart, std::move(h)}};
}

/// Wong's equations coded directly:
///   xdot^i    = g^{ij} p_j
///   pdot_i    = -1/2 d_i g^{jk} p_j p_k - pbar_a B^a_{ji} g^{jk} p_k
///   pbardot_b = c^a_{db} A^d_i pbar_a xdot^i
/// with d_i g^{-1} = -g^{-1} (d_i g) g^{-1}.
inline PhaseVelocity wong_rhs(const PrincipalData& pd, const WongData& wd, const DualPoint& pt,
                              const DiffConfig& cfg = {}) {
  const int m = pd.m, ng = pd.ng;
  if (pt.x.size() != m || pt.p.size() != m + ng) throw ShapeError("wong_rhs: point must be (x; p, pbar)");
  const auto g = [&](const Vec& x) { return detail::metric_at(wd, m, x); };
  const Mat gi = g(pt.x).inverse();
  const auto dg = fd_partials(g, pt.x, cfg.h);
  const Vec p = pt.p.head(m), pbar = pt.p.tail(ng);
  const Vec xdot = gi * p;
  const Mat A = pd.A(pt.x);
  const Tensor3 B = curvature(pd, pt.x, cfg);

  Vec pdot(m), pbdot(ng);
  for (int i = 0; i < m; ++i) {
    const Mat dgi = -gi * dg[static_cast<std::size_t>(i)] * gi;
    double s = -0.5 * p.dot(dgi * p);
    for (int a = 0; a < ng; ++a) {
      for (int j = 0; j < m; ++j) s -= pbar[a] * B(a, j, i) * xdot[j];
    }
    pdot[i] = s;
  }
  for (int b = 0; b < ng; ++b) {
    double s = 0.0;
    for (int a = 0; a < ng; ++a) {
      for (int d = 0; d < ng; ++d) {
        for (int i = 0; i < m; ++i) s += pd.c(a, d, b) * A(d, i) * pbar[a] * xdot[i];
      }
    }
    pbdot[b] = s;
  }
  return {xdot, join(pdot, pbdot)};
}

}  // namespace amech
