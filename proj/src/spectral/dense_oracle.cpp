#include "appraise/spectral/dense_oracle.hpp"

#include "appraise/errors.hpp"

namespace appraise::spectral {

Vector dense_eigen_oracle(const Matrix& b) {
  if (b.rows() != b.cols()) {
    throw InvalidArgument("dense_eigen_oracle: matrix is not square");
  }
  if (b.size() == 0) return Vector(0);
  const double asym = (b - b.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10 * std::max(1.0, b.cwiseAbs().maxCoeff())) {
    throw InvalidArgument("dense_eigen_oracle: matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(b, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw NumericalFailure("dense_eigen_oracle: eigensolver did not converge");
  }
  return es.eigenvalues();
}

}  // namespace appraise::spectral
