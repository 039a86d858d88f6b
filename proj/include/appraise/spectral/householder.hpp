#pragma once

#include "appraise/types.hpp"

namespace appraise::spectral {

/// Elementary reflector H = I - 2 w w^T that maps x onto -sign * ||x|| * e_pivot.
/// The pivot is the largest-magnitude entry (lowest index on ties) so that
/// forming w = x + sign * ||x|| * e_pivot never cancels.
struct Reflector {
  Vector w;  // unit length
  Index pivot = 0;
  double sign = 1.0;  // sign(x[pivot]), +1 for zero

  /// y <- H y
  void apply(Eigen::Ref<Vector> y) const;
  /// Columns of A (restricted to the reflector's coordinates) <- A H.
  void apply_right(Eigen::Ref<Matrix> a) const;
};

/// Throws InvalidArgument on a zero vector.
Reflector householder_toward_axis(Eigen::Ref<const Vector> x);

}  // namespace appraise::spectral
