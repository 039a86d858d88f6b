#pragma once

#include <vector>

#include "appraise/types.hpp"

namespace appraise::spectral {

/// Roots of f(mu) = 1 + rho * sum_i z_i^2 / (d_i - mu), i.e. the eigenvalues of
/// diag(d) + rho z z^T. Poles strictly increasing, weights nonzero, rho > 0.
struct SecularProblem {
  Vector poles;
  Vector weights;
  double rho = 1.0;
};

/// Each root is stored relative to its nearest pole, mu_k = poles[origin_k] + offset_k,
/// so that differences d_j - mu_k keep full relative accuracy even when a root
/// sits within rounding distance of a pole.
struct SecularSolution {
  std::vector<Index> origin;
  Vector offset;
  Vector roots;
  int max_iterations_used = 0;

  /// d_j - mu_k computed from the shifted representation.
  double pole_minus_root(const Vector& poles, Index j, Index k) const {
    return (poles[static_cast<Eigen::Index>(j)] - poles[static_cast<Eigen::Index>(origin[k])]) -
           offset[static_cast<Eigen::Index>(k)];
  }
};

struct SecularOptions {
  int max_iterations = 100;
  /// Stop once |f| <= residual * (1 + |f'| * |offset|).
  double residual = 1e-13;
};

/// Throws NumericalFailure naming the interval if a root does not converge.
SecularSolution secular_roots(const SecularProblem& problem, const SecularOptions& options = {});

/// Evaluate the secular function at poles[origin] + offset.
double secular_value(const SecularProblem& problem, Index origin, double offset);

/// Vector w >= 0 such that diag(old) + w w^T has eigenvalues `updated` exactly.
/// Both inputs ascending with strict interlacing old_i < new_i < old_{i+1}.
/// Throws NumericalFailure when interlacing is violated.
Vector loewner_weights(const Vector& old_eigvals, const Vector& new_eigvals);

/// Same, using the shifted root representation from secular_roots.
Vector loewner_weights(const Vector& poles, const SecularSolution& solution);

}  // namespace appraise::spectral
