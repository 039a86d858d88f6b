#pragma once

#include "appraise/types.hpp"

namespace appraise::spectral {

/// Ascending eigenvalues of a symmetric matrix via a full dense solve.
/// Reference path for tests and the oracle arm of the benchmark.
Vector dense_eigen_oracle(const Matrix& b);

}  // namespace appraise::spectral
