#pragma once

#include <vector>

#include "appraise/set_objective.hpp"

namespace appraise::classic {

/// A(d) = c' - b d^-beta. At d = 0 the value is -inf unless empty_floor > 0,
/// in which case d is replaced by empty_floor.
struct ChinchillaLaw {
  double c_prime = 1.0;
  double b = 1.0;
  double beta = 1.0;
  double empty_floor = 0.0;

  void validate() const;
  double value(double d) const;
};

/// A(d_1..d_K) = c' - sum_i (c_i + d_i)^-beta_i
struct ClusterLaw {
  double c_prime = 1.0;
  std::vector<double> c;
  std::vector<double> beta;

  void validate() const;
  double value(const std::vector<double>& counts) const;
};

/// Multi-epoch law: with compute budget C (samples), d unique samples are
/// repeated kbar = floor(C/d) times and the j-th repetition decays with
/// beta_j = beta * 2^-((j-1)/tau).
struct EpochLaw {
  double c_prime = 1.0;
  double b = 1.0;
  double beta = 0.5;
  double budget = 1.0;
  double half_life = 1.0;

  void validate() const;
  double beta_j(double j) const;
  /// Predicted loss; +inf at d = 0.
  double loss(double d) const;
  double value(double d) const { return c_prime - loss(d); }
};

/// Set function f(X) = A(|X|), or A(per-domain counts) for the cluster law.
class ScalingLawObjective : public SetObjective {
 public:
  ScalingLawObjective(Index n, ChinchillaLaw law);
  ScalingLawObjective(Index n, EpochLaw law);
  ScalingLawObjective(std::vector<Index> domain_of, ClusterLaw law);

  Index ground_size() const override { return n_; }
  std::string name() const override;
  double value() const override;
  double gain(Index s) const override;
  void commit(Index s) override;
  void reset() override;

 private:
  enum class Variant { chinchilla, cluster, epoch };
  double value_at(const std::vector<double>& counts) const;

  Variant variant_;
  Index n_;
  ChinchillaLaw chinchilla_;
  ClusterLaw cluster_;
  EpochLaw epoch_;
  std::vector<Index> domain_of_;
  std::vector<double> counts_;
};

}  // namespace appraise::classic
