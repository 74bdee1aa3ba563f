#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "amech/tensor.hpp"

namespace amech {

/// Axis-aligned box used to draw sample points.
struct Box {
  Vec lo;
  Vec hi;

  static Box cube(int dim, double half_width) {
    return {Vec::Constant(dim, -half_width), Vec::Constant(dim, half_width)};
  }
  int dim() const { return static_cast<int>(lo.size()); }
};

namespace detail {
inline double radical_inverse(std::uint64_t i, int base) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}
}  // namespace detail

/// Halton points in `box`, skipping the origin-corner index 0.
inline std::vector<Vec> halton_points(const Box& box, int count) {
  static constexpr int kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41, 43,
                                    47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103};
  if (box.dim() > static_cast<int>(std::size(kPrimes))) throw ShapeError("halton_points: dimension too large");
  std::vector<Vec> pts;
  pts.reserve(static_cast<std::size_t>(count));
  for (int k = 1; k <= count; ++k) {
    Vec p(box.dim());
    for (int d = 0; d < box.dim(); ++d) {
      p[d] = box.lo[d] + (box.hi[d] - box.lo[d]) * detail::radical_inverse(static_cast<std::uint64_t>(k), kPrimes[d]);
    }
    pts.push_back(std::move(p));
  }
  return pts;
}

/// Uniform pseudo-random points; deterministic for a given seed.
inline std::vector<Vec> uniform_points(const Box& box, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Vec> pts;
  pts.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    Vec p(box.dim());
    for (int d = 0; d < box.dim(); ++d) p[d] = box.lo[d] + (box.hi[d] - box.lo[d]) * u(rng);
    pts.push_back(std::move(p));
  }
  return pts;
}

}  // namespace amech
