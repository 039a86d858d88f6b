#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "appraise/spectral/dense_oracle.hpp"
#include "appraise/types.hpp"

namespace testsupport {

using appraise::DesignMatrix;
using appraise::Index;
using appraise::Matrix;
using appraise::Vector;

inline DesignMatrix gaussian(Index n, Index m, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  DesignMatrix d(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    for (Eigen::Index j = 0; j < d.cols(); ++j) d(i, j) = g(rng);
  }
  return d;
}

inline Vector gaussian_vector(Index m, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vector v(static_cast<Eigen::Index>(m));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = g(rng);
  return v;
}

inline Index uniform_index(Index lo, Index hi, std::mt19937_64& rng) {
  return std::uniform_int_distribution<Index>(lo, hi)(rng);
}

/// Random orthonormal m x r matrix.
inline Matrix random_orthonormal(Index m, Index r, std::mt19937_64& rng) {
  Matrix a = gaussian(m, r, rng);
  Eigen::HouseholderQR<Matrix> qr(a);
  return qr.householderQ() * Matrix::Identity(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(r));
}

/// Ascending spectrum of size m: the given positive values padded with zeros.
inline Vector pad_spectrum(const Vector& positive, Index m) {
  Vector out = Vector::Zero(static_cast<Eigen::Index>(m));
  out.tail(positive.size()) = positive;
  return out;
}

/// max_i |a_i - b_i| / max(1e-300, max|b|): normwise relative error of two sorted spectra.
inline double spectrum_error(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) return INFINITY;
  if (a.size() == 0) return 0.0;
  const double scale = std::max(1e-300, b.cwiseAbs().maxCoeff());
  return (a - b).cwiseAbs().maxCoeff() / scale;
}

inline Vector sorted(Vector v) {
  std::sort(v.data(), v.data() + v.size());
  return v;
}

}  // namespace testsupport
