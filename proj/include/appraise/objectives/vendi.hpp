#pragma once

#include "appraise/objectives/spectral_objective.hpp"
#include "appraise/types.hpp"

namespace appraise::objectives {

/// Row-normalize and scale so that B_V = D^T D has unit trace
/// (density_trace1), and for monotone_e_lambda_max further scale so that
/// lambda_max(B_V) = 1/e. `none` returns a copy.
DesignMatrix density_normalize(const DesignMatrix& design, Normalization mode);

enum class VendiScaling {
  as_given,   // eigenvalues already sum to <= 1
  unit_trace  // divide by their sum first
};

/// Renyi Vendi score of order q >= 0: exp(H_q) of the eigenvalue distribution.
/// q = 1 is the Shannon case, q = 0 counts nonzero eigenvalues.
double vendi_score(const Vector& eigvals, double q, VendiScaling scaling = VendiScaling::as_given);

double vendi_score(const spectral::SpectralState& state, double q,
                   VendiScaling scaling = VendiScaling::as_given);

}  // namespace appraise::objectives
