#pragma once

#include <vector>

#include "appraise/spectral/deflation.hpp"
#include "appraise/spectral/secular.hpp"
#include "appraise/types.hpp"

namespace appraise::spectral {

struct StateTolerances {
  DeflationTolerances deflation;
  /// alpha > rank_increase * max(||u||, sqrt(lambda_max)) adds a new direction.
  double rank_increase = 1e-8;
  /// A downdated eigenvalue <= zero_eigenvalue * max(lambda_max, ||u||^2) is dropped.
  double zero_eigenvalue = 1e-12;
  /// A downdated eigenvalue below -psd_violation * max(lambda_max, ||u||^2) is an error.
  double psd_violation = 1e-8;
  /// ||Q^T Q - I||_max above this after a commit triggers re-orthogonalization.
  double reorth_trigger = 1e-10;
  /// ... and above this the commit fails.
  double orthogonality_failure = 1e-6;
  Index reorth_period = 512;
  SecularOptions secular;
};

/// Decomposition of a candidate u against the current eigenbasis.
struct RankOneQuery {
  Vector v;                  // Q^T u
  double u_norm = 0.0;       // ||u||
  double u_perp_norm = 0.0;  // ||u - Q Q^T u||
  Update direction = Update::add;
};

/// Spectral change caused by one rank-one modification. Eigenvalues not listed
/// are unchanged; `removed` and `added` have equal length. A pole at 0 in
/// `removed` marks a rank increase, a 0 in `added` a rank decrease.
struct SpectralDelta {
  std::vector<double> removed;
  std::vector<double> added;
  Index new_rank = 0;
};

/// Reusable scratch for queries; one per thread.
struct QueryWorkspace {
  Vector v;
  Vector u_perp;
  Vector poles;
  Vector weights;
  DeflationPlan plan;
  SpectralDelta delta;
};

struct SpectrumAfterUpdate {
  Vector eigvals;  // ascending, strictly positive
  Index rank = 0;
};

/// Maintained factorization B = Q diag(lambda) Q^T of a PSD matrix built from
/// rank-one updates. Q is m x r with orthonormal columns, lambda ascending and
/// positive. Queries are const and safe to run concurrently with their own
/// workspaces; commits need exclusive access.
class SpectralState {
 public:
  SpectralState() = default;
  explicit SpectralState(Index dim, StateTolerances tol = {});

  /// Adopt an existing factorization (columns of q orthonormal, eigvals ascending, positive).
  static SpectralState from_factorization(Matrix q, Vector eigvals, StateTolerances tol = {});

  Index dim() const { return dim_; }
  Index rank() const { return static_cast<Index>(eigvals_.size()); }
  const Matrix& eigvecs() const { return q_; }
  const Vector& eigvals() const { return eigvals_; }
  Index commits() const { return commits_; }
  Index commits_since_reorthogonalization() const { return since_reorth_; }
  double accumulated_trace() const { return trace_accum_; }
  const StateTolerances& tolerances() const { return tol_; }

  RankOneQuery project(Eigen::Ref<const Vector> u, Update direction) const;

  /// Eigenvalue change for B + rho u u^T without touching the state. O(m r + r^2).
  const SpectralDelta& query(Eigen::Ref<const Vector> u, Update direction,
                             QueryWorkspace& ws) const;

  SpectrumAfterUpdate eigenvalues_after_rank_one(Eigen::Ref<const Vector> u,
                                                 Update direction) const;

  /// B <- B + rho u u^T, eigenvectors included.
  void commit(Eigen::Ref<const Vector> u, Update direction);

  /// max |Q^T Q - I|
  double orthogonality_drift() const;
  /// Modified Gram-Schmidt pass over Q.
  void reorthogonalize();

  Matrix reconstruct() const;
  /// Full spectrum of B (m values, zeros included), ascending.
  Vector full_spectrum() const;

 private:
  void prepare(Eigen::Ref<const Vector> u, Update direction, QueryWorkspace& ws,
               bool& rank_increase, double& scale) const;

  Index dim_ = 0;
  Matrix q_;
  Vector eigvals_;
  Index commits_ = 0;
  Index since_reorth_ = 0;
  double trace_accum_ = 0.0;
  StateTolerances tol_;
};

}  // namespace appraise::spectral
