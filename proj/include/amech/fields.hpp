#pragma once

#include <atomic>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "amech/tensor.hpp"

namespace amech {

namespace detail {
inline std::atomic<double>& fd_step_storage() {
  static std::atomic<double> step{1e-5};
  return step;
}
}  // namespace detail

/// Process-wide default finite-difference step (the CLI sets it from AMECH_FD_H).
inline double default_fd_step() { return detail::fd_step_storage().load(std::memory_order_relaxed); }

inline void set_default_fd_step(double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw ConfigError("finite-difference step must be positive");
  detail::fd_step_storage().store(h, std::memory_order_relaxed);
}

/// Central-difference settings. `h` is used for first derivatives; second
/// derivatives that are built from differences of differences use the wider
/// `h_second` to keep rounding noise down.
struct DiffConfig {
  double h = default_fd_step();
  double h_second = 1e-4;
};

/// Real-valued field on R^dim with an optional analytic gradient.
struct ScalarField {
  int dim = 0;
  std::function<double(const Vec&)> eval;
  std::function<Vec(const Vec&)> grad;

  double operator()(const Vec& x) const { return eval(x); }
  bool has_grad() const noexcept { return static_cast<bool>(grad); }
};

/// Array-valued field on R^dim; `Value` is Vec, Mat or Tensor3.
template <class Value>
struct Field {
  int dim = 0;
  std::function<Value(const Vec&)> eval;

  Value operator()(const Vec& x) const { return eval(x); }
};

/// Vector-valued field with an optional analytic Jacobian (rows = outputs).
struct VectorField : Field<Vec> {
  std::function<Mat(const Vec&)> jacobian;

  bool has_jacobian() const noexcept { return static_cast<bool>(jacobian); }
};

using MatrixField = Field<Mat>;
using TensorField = Field<Tensor3>;

inline VectorField make_vector_field(int dim, std::function<Vec(const Vec&)> eval,
                                     std::function<Mat(const Vec&)> jacobian = {}) {
  VectorField f;
  f.dim = dim;
  f.eval = std::move(eval);
  f.jacobian = std::move(jacobian);
  return f;
}

inline VectorField constant_section(int dim, Vec value) {
  const auto n = value.size();
  return make_vector_field(
      dim, [value](const Vec&) { return value; },
      [n, dim](const Vec&) { return Mat::Zero(n, dim); });
}

namespace detail {

inline void require_dim(int expected, const Vec& x, const char* what) {
  if (x.size() != expected) {
    throw ShapeError(std::string(what) + ": expected point of dimension " + std::to_string(expected) +
                     ", got " + std::to_string(x.size()));
  }
}

template <class Value>
Value checked(Value v, int index, const char* where) {
  if (!all_finite(v)) throw NonFiniteField(index, where);
  return v;
}

}  // namespace detail

/// Central-difference partial derivatives of an array-valued callable:
/// entry i is (f(x + h e_i) - f(x - h e_i)) / 2h.
template <class Fn>
auto fd_partials(const Fn& f, const Vec& x, double h) {
  using Value = std::decay_t<decltype(f(x))>;
  std::vector<Value> out;
  out.reserve(static_cast<std::size_t>(x.size()));
  Vec xp = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    xp[i] = xi + h;
    Value fp = detail::checked(f(xp), static_cast<int>(i), "fd_partials");
    xp[i] = xi - h;
    Value fm = detail::checked(f(xp), static_cast<int>(i), "fd_partials");
    xp[i] = xi;
    out.push_back((fp - fm) / (2.0 * h));
  }
  return out;
}

inline Vec fd_gradient(const ScalarField& f, const Vec& x, const DiffConfig& cfg = {}) {
  detail::require_dim(f.dim, x, "fd_gradient");
  if (f.has_grad()) {
    Vec g = f.grad(x);
    if (g.size() != x.size()) throw ShapeError("fd_gradient: analytic gradient has wrong length");
    for (Eigen::Index i = 0; i < g.size(); ++i) {
      if (!std::isfinite(g[i])) throw NonFiniteField(static_cast<int>(i), "gradient");
    }
    return g;
  }
  Vec g(x.size());
  Vec xp = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    xp[i] = xi + cfg.h;
    const double fp = f(xp);
    xp[i] = xi - cfg.h;
    const double fm = f(xp);
    xp[i] = xi;
    if (!std::isfinite(fp) || !std::isfinite(fm)) throw NonFiniteField(static_cast<int>(i), "gradient");
    g[i] = (fp - fm) / (2.0 * cfg.h);
  }
  return g;
}

inline Mat fd_jacobian(const VectorField& F, const Vec& x, const DiffConfig& cfg = {}) {
  detail::require_dim(F.dim, x, "fd_jacobian");
  if (F.has_jacobian()) return detail::checked(F.jacobian(x), -1, "jacobian");
  const auto cols = fd_partials(F.eval, x, cfg.h);
  const Eigen::Index rows = cols.empty() ? F(x).size() : cols.front().size();
  Mat J(rows, x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) J.col(i) = cols[static_cast<std::size_t>(i)];
  return J;
}

/// Symmetrized Hessian. With an analytic gradient it is the central-difference
/// Jacobian of that gradient (step h); otherwise the four-point second
/// difference with step h_second.
inline Mat fd_hessian(const ScalarField& f, const Vec& x, const DiffConfig& cfg = {}) {
  detail::require_dim(f.dim, x, "fd_hessian");
  const Eigen::Index d = x.size();
  Mat H(d, d);
  if (f.has_grad()) {
    const auto cols = fd_partials(f.grad, x, cfg.h);
    for (Eigen::Index i = 0; i < d; ++i) H.col(i) = cols[static_cast<std::size_t>(i)];
  } else {
    const double s = cfg.h_second;
    Vec xp = x;
    auto at = [&](Eigen::Index i, double di, Eigen::Index j, double dj) {
      xp = x;
      xp[i] += di;
      xp[j] += dj;
      const double v = f(xp);
      if (!std::isfinite(v)) throw NonFiniteField(static_cast<int>(i), "hessian");
      return v;
    };
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = i; j < d; ++j) {
        const double v = (at(i, s, j, s) - at(i, s, j, -s) - at(i, -s, j, s) + at(i, -s, j, -s)) /
                         (4.0 * s * s);
        H(i, j) = v;
        H(j, i) = v;
      }
    }
  }
  return 0.5 * (H + H.transpose());
}

}  // namespace amech
