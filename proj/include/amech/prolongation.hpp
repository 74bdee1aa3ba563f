#pragma once

#include "amech/tensor.hpp"

namespace amech {

/// Coordinates (x, y; z, v) on the prolongation of E over tau.
struct ProlPointE {
  Vec x;
  Vec y;
  Vec z;
  Vec v;
};

/// Coordinates (x, p; z, v) on the prolongation of E over the dual projection.
/// (z, v) are the coefficients in the frame (e~_a, e-bar_a).
struct ProlPointEstar {
  Vec x;
  Vec p;
  Vec z;
  Vec v;
};

/// A covector on a prolongation written as (base point; two coefficient blocks).
/// For the image of A_E the base point is (x, z) and the blocks are
/// (zeta, eta); for the image of the flat map it is (x, p) and (mu, nu).
struct ProlCovector {
  Vec x;
  Vec fiber;
  Vec first;
  Vec second;
};

}  // namespace amech
