#pragma once

#include <functional>

#include "appraise/objectives/phi.hpp"
#include "appraise/types.hpp"

namespace appraise::objectives {

struct ZetaReport {
  double zeta = 1.0;
  double spectral_radius = 0.0;
  double greedy_bound = 0.0;  // 1 - exp(-zeta)
};

/// zeta = phi'(rho) / phi'(0). Throws UnsupportedPhi when phi'(0) is not finite and positive.
ZetaReport zeta_bound(const Phi& phi, double spectral_radius);

/// Divided differences of g at strictly increasing points, g' on the diagonal.
Matrix loewner_matrix(const std::function<double(double)>& g,
                      const std::function<double(double)>& dg, const Vector& points);

double min_eigenvalue(const Matrix& symmetric);

struct AntitoneReport {
  Matrix a;
  Matrix b;
  Vector difference_eigvals;  // eig(g(B) - g(A)), ascending
  Vector b_minus_a_eigvals;
  bool psd = true;
};

/// g(M) = V g(Lambda) V^T for symmetric M.
Matrix matrix_function(const Matrix& m, const std::function<double(double)>& g);

/// A = diag(1,2,3), B = A + 0.1 * ones, g(x) = -exp(-x): g(B) - g(A) is not PSD.
AntitoneReport matrix_antitone_counterexample_check();

}  // namespace appraise::objectives
