#pragma once

#include <limits>
#include <vector>

#include "appraise/spectral/householder.hpp"
#include "appraise/types.hpp"

namespace appraise::spectral {

inline constexpr double kEps = std::numeric_limits<double>::epsilon();

struct DeflationTolerances {
  /// |v_i| <= weight * ||v|| counts as a zero weight.
  double weight = 64.0 * kEps;
  /// |l_i - l_j| <= eig_equal * max(1, l_max) counts as a repeated eigenvalue.
  double eig_equal = 64.0 * kEps;
};

/// A run of (numerically) repeated eigenvalues whose weights were collapsed onto
/// a single pivot coordinate by a reflector.
struct DeflationGroup {
  std::vector<Index> members;  // ascending coordinates
  double weight_norm = 0.0;    // ||v_E||
  bool reflected = false;      // false when the whole group was preserved
  Reflector reflector;         // acts on v restricted to `members`
  Index pivot = 0;             // coordinate (not member slot) kept active
};

/// Reduction of diag(d) + v v^T to a problem with distinct poles and nonzero
/// weights. Coordinates in `preserved` keep their eigenvalue.
struct DeflationPlan {
  std::vector<DeflationGroup> groups;  // only groups with two or more members
  std::vector<Index> active;           // ascending coordinates
  std::vector<Index> preserved;        // ascending coordinates
  Vector poles;                        // d[active]
  Vector weights;                      // |reduced weight| for each active coordinate
  Vector sign_flips;                   // sign of the reduced weight, reapplied to eigenvectors
  Index size = 0;                      // pre-deflation coordinate count

  void clear();
};

/// eigvals must be sorted ascending and have the same length as v.
void deflate(const Vector& eigvals, const Vector& v, const DeflationTolerances& tol,
             DeflationPlan& plan);

DeflationPlan deflate(const Vector& eigvals, const Vector& v,
                      const DeflationTolerances& tol = {});

}  // namespace appraise::spectral
