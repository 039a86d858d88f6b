#pragma once

#include <cmath>
#include <memory>
#include <string>

#include "appraise/objectives/phi.hpp"
#include "appraise/set_objective.hpp"
#include "appraise/spectral/spectral_state.hpp"

namespace appraise::objectives {

enum class Normalization { none, density_trace1, monotone_e_lambda_max };

std::string to_string(Normalization n);

/// f(X) = sum_i phi(lambda_i(B_X)) + (m - r) phi(0), reported relative to the
/// empty set so that f({}) = 0. B_X = D[X]^T D[X] is kept factored and gains
/// come from secular-equation queries.
class SpectralObjective : public SetObjective {
 public:
  /// `design` must already carry the requested normalization (see density_normalize);
  /// `normalization` is recorded for reporting only.
  SpectralObjective(std::shared_ptr<const DesignMatrix> design, Phi phi,
                    Normalization normalization = Normalization::none,
                    spectral::StateTolerances tol = {});

  Index ground_size() const override { return static_cast<Index>(design_->rows()); }
  std::string name() const override;
  double value() const override;
  double gain(Index s) const override;
  void commit(Index s) override;
  void reset() override;

  /// f(S - s) - f(S) for s in S.
  double removal_gain(Index s) const;
  /// Remove s from the committed set (rank-one downdate).
  void uncommit(Index s);

  /// sum_i phi(lambda_i) + (m - r) phi(0), no baseline subtraction.
  double raw_value() const;
  double empty_value() const;

  const Phi& phi() const { return phi_; }
  Normalization normalization() const { return normalization_; }
  const spectral::SpectralState& state() const { return state_; }
  const DesignMatrix& design() const { return *design_; }

 private:
  double phi_clamped(double x) const;
  double delta_value(const spectral::SpectralDelta& d) const;
  void check_index(Index s) const;

  std::shared_ptr<const DesignMatrix> design_;
  Phi phi_;
  Normalization normalization_;
  spectral::StateTolerances tol_;
  spectral::SpectralState state_;
  double phi_zero_;
};

/// Same objective evaluated by a dense eigensolve of B_X + x_s x_s^T per gain,
/// O(m^3) each. Reference arm for tests and the benchmark.
class OracleSpectralObjective : public SetObjective {
 public:
  OracleSpectralObjective(std::shared_ptr<const DesignMatrix> design, Phi phi);

  Index ground_size() const override { return static_cast<Index>(design_->rows()); }
  std::string name() const override;
  double value() const override { return value_; }
  double gain(Index s) const override;
  void commit(Index s) override;
  void reset() override;

  const Matrix& gram() const { return gram_; }

 private:
  double value_of(const Matrix& b) const;

  std::shared_ptr<const DesignMatrix> design_;
  Phi phi_;
  Matrix gram_;
  double value_ = 0.0;
  double zero_eigenvalue_ = spectral::StateTolerances{}.zero_eigenvalue;
};

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      c_ += (sum_ - t) + x;
    } else {
      c_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double result() const { return sum_ + c_; }

 private:
  double sum_ = 0.0;
  double c_ = 0.0;
};

}  // namespace appraise::objectives
