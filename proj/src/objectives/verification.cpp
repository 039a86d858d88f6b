#include "appraise/objectives/verification.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "appraise/errors.hpp"
#include "appraise/spectral/dense_oracle.hpp"

namespace appraise::objectives {

ZetaReport zeta_bound(const Phi& phi, double spectral_radius) {
  if (!(spectral_radius >= 0.0) || !std::isfinite(spectral_radius)) {
    throw InvalidArgument("zeta_bound: spectral radius must be finite and >= 0");
  }
  const double d0 = phi.derivative(0.0);
  if (!std::isfinite(d0) || !(d0 > 0.0)) {
    throw UnsupportedPhi("zeta_bound: " + phi.name() + " has no finite positive derivative at 0");
  }
  ZetaReport r;
  r.spectral_radius = spectral_radius;
  r.zeta = phi.derivative(spectral_radius) / d0;
  r.greedy_bound = 1.0 - std::exp(-r.zeta);
  return r;
}

Matrix loewner_matrix(const std::function<double(double)>& g,
                      const std::function<double(double)>& dg, const Vector& points) {
  const auto n = points.size();
  for (Eigen::Index i = 1; i < n; ++i) {
    if (!(points[i] > points[i - 1])) {
      std::ostringstream msg;
      msg << "loewner_matrix: points must be strictly increasing (position " << i << ")";
      throw InvalidArgument(msg.str());
    }
  }
  Vector gv(n);
  for (Eigen::Index i = 0; i < n; ++i) gv[i] = g(points[i]);
  Matrix l(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    l(i, i) = dg(points[i]);
    for (Eigen::Index j = 0; j < i; ++j) {
      l(i, j) = l(j, i) = (gv[i] - gv[j]) / (points[i] - points[j]);
    }
  }
  return l;
}

double min_eigenvalue(const Matrix& symmetric) {
  return spectral::dense_eigen_oracle(symmetric).minCoeff();
}

Matrix matrix_function(const Matrix& m, const std::function<double(double)>& g) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  Vector gl = es.eigenvalues().unaryExpr(g);
  return es.eigenvectors() * gl.asDiagonal() * es.eigenvectors().transpose();
}

AntitoneReport matrix_antitone_counterexample_check() {
  AntitoneReport r;
  r.a = Vector::LinSpaced(3, 1.0, 3.0).asDiagonal();
  r.b = r.a + Matrix::Constant(3, 3, 0.1);
  const auto g = [](double x) { return -std::exp(-x); };
  const Matrix diff = matrix_function(r.b, g) - matrix_function(r.a, g);
  r.difference_eigvals = spectral::dense_eigen_oracle(0.5 * (diff + diff.transpose()));
  r.b_minus_a_eigvals = spectral::dense_eigen_oracle(r.b - r.a);
  r.psd = r.difference_eigvals.minCoeff() >= 0.0;
  return r;
}

}  // namespace appraise::objectives
