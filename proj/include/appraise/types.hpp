#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace appraise {

using Index = std::size_t;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// n x m row-major sample embeddings; row i is element i of the ground set.
using DesignMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Sign of a rank-one modification.
enum class Update : int { add = 1, remove = -1 };

inline double sign_of(Update u) { return u == Update::add ? 1.0 : -1.0; }

}  // namespace appraise
