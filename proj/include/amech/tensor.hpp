#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <vector>

#include "amech/errors.hpp"

namespace amech {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Dense rank-3 array, row-major. Structure functions use the layout
/// C(gamma, alpha, beta) = C^gamma_{alpha beta} throughout the project.
class Tensor3 {
 public:
  Tensor3() = default;
  Tensor3(int d0, int d1, int d2, double fill = 0.0)
      : d0_(d0), d1_(d1), d2_(d2), data_(static_cast<std::size_t>(d0) * d1 * d2, fill) {}

  static Tensor3 Zero(int d0, int d1, int d2) { return Tensor3(d0, d1, d2); }

  int dim0() const noexcept { return d0_; }
  int dim1() const noexcept { return d1_; }
  int dim2() const noexcept { return d2_; }
  std::size_t size() const noexcept { return data_.size(); }

  double& operator()(int i, int j, int k) { return data_[index(i, j, k)]; }
  double operator()(int i, int j, int k) const { return data_[index(i, j, k)]; }

  const std::vector<double>& data() const noexcept { return data_; }
  std::vector<double>& data() noexcept { return data_; }

  bool same_shape(const Tensor3& o) const noexcept {
    return d0_ == o.d0_ && d1_ == o.d1_ && d2_ == o.d2_;
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
  }

  Tensor3& operator+=(const Tensor3& o) {
    require_same(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  Tensor3& operator-=(const Tensor3& o) {
    require_same(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  Tensor3& operator*=(double s) {
    for (double& v : data_) v *= s;
    return *this;
  }

  friend Tensor3 operator+(Tensor3 a, const Tensor3& b) { return a += b; }
  friend Tensor3 operator-(Tensor3 a, const Tensor3& b) { return a -= b; }
  friend Tensor3 operator*(Tensor3 a, double s) { return a *= s; }
  friend Tensor3 operator*(double s, Tensor3 a) { return a *= s; }
  friend Tensor3 operator/(Tensor3 a, double s) { return a *= (1.0 / s); }

 private:
  std::size_t index(int i, int j, int k) const noexcept {
    return (static_cast<std::size_t>(i) * d1_ + j) * d2_ + k;
  }
  void require_same(const Tensor3& o) const {
    if (!same_shape(o)) throw ShapeError("Tensor3 shape mismatch");
  }

  int d0_ = 0, d1_ = 0, d2_ = 0;
  std::vector<double> data_;
};

inline bool all_finite(double v) { return std::isfinite(v); }
inline bool all_finite(const Vec& v) { return v.allFinite(); }
inline bool all_finite(const Mat& v) { return v.allFinite(); }
inline bool all_finite(const Tensor3& t) {
  for (double v : t.data()) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

/// Concatenate two coordinate blocks, e.g. (x, y) or (x, p).
inline Vec join(const Vec& a, const Vec& b) {
  Vec out(a.size() + b.size());
  out << a, b;
  return out;
}

/// Levi-Civita structure constants of so(3): c^c_{ab} = eps_{abc}.
inline Tensor3 so3_structure_constants() {
  Tensor3 c(3, 3, 3);
  for (int a = 0; a < 3; ++a) {
    const int b = (a + 1) % 3;
    const int g = (a + 2) % 3;
    c(g, a, b) = 1.0;
    c(g, b, a) = -1.0;
  }
  return c;
}

}  // namespace amech
