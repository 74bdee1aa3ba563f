#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "amech/fields.hpp"

namespace amech {

/// A random smooth function on R^dim: a few plane waves plus a small
/// quadratic and a linear part. Coefficients are O(1) so derivatives stay
/// moderate on the unit box.
inline ScalarField random_smooth_function(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 6.283185307179586);
  constexpr int waves = 3;
  Mat w(waves, dim);
  Vec amp(waves), phi(waves);
  for (int k = 0; k < waves; ++k) {
    for (int i = 0; i < dim; ++i) w(k, i) = 0.6 * normal(rng);
    amp[k] = 0.5 * normal(rng);
    phi[k] = phase(rng);
  }
  Mat Q(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) Q(i, j) = 0.1 * normal(rng);
  }
  Q = 0.5 * (Q + Q.transpose()).eval();
  Vec b(dim);
  for (int i = 0; i < dim; ++i) b[i] = 0.5 * normal(rng);

  return ScalarField{dim, [w, amp, phi, Q, b](const Vec& z) {
                       double s = b.dot(z) + 0.5 * z.dot(Q * z);
                       for (int k = 0; k < amp.size(); ++k) s += amp[k] * std::sin(w.row(k).dot(z) + phi[k]);
                       return s;
                     },
                     {}};
}

}  // namespace amech
