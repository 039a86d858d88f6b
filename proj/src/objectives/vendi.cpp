#include "appraise/objectives/vendi.hpp"

#include <cmath>
#include <sstream>

#include "appraise/errors.hpp"
#include "appraise/spectral/dense_oracle.hpp"

namespace appraise::objectives {

DesignMatrix density_normalize(const DesignMatrix& design, Normalization mode) {
  DesignMatrix out = design;
  if (mode == Normalization::none) return out;
  const auto n = out.rows();
  if (n == 0) throw InvalidArgument("density_normalize: empty design matrix");
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const double norm = out.row(i).norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      std::ostringstream msg;
      msg << "density_normalize: row " << i << " has zero or non-finite norm";
      throw InvalidArgument(msg.str());
    }
    out.row(i) *= scale / norm;
  }
  if (mode == Normalization::monotone_e_lambda_max) {
    const Matrix gram = out.transpose() * out;
    const double lmax = spectral::dense_eigen_oracle(gram).maxCoeff();
    out *= std::sqrt(std::exp(-1.0) / lmax);
  }
  return out;
}

double vendi_score(const Vector& eigvals, double q, VendiScaling scaling) {
  if (!(q >= 0.0) || !std::isfinite(q)) {
    throw InvalidArgument("vendi_score: order q must be a finite value >= 0");
  }
  double total = 0.0;
  for (double x : eigvals) total += std::max(x, 0.0);
  const double div = (scaling == VendiScaling::unit_trace && total > 0.0) ? total : 1.0;

  if (q == 0.0) {
    double count = 0.0;
    for (double x : eigvals) count += (x / div > 1e-300) ? 1.0 : 0.0;
    return count;
  }
  CompensatedSum acc;
  if (q == 1.0) {
    for (double x : eigvals) {
      const double p = x / div;
      if (p > 1e-300) acc.add(-p * std::log(p));
    }
    return std::exp(acc.result());
  }
  for (double x : eigvals) {
    const double p = x / div;
    if (p > 1e-300) acc.add(std::pow(p, q));
  }
  return std::exp(std::log(acc.result()) / (1.0 - q));
}

double vendi_score(const spectral::SpectralState& state, double q, VendiScaling scaling) {
  return vendi_score(state.eigvals(), q, scaling);
}

}  // namespace appraise::objectives
