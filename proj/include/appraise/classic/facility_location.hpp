#pragma once

#include <memory>

#include "appraise/classic/similarity.hpp"
#include "appraise/set_objective.hpp"

namespace appraise::classic {

/// f(A) = sum_j max_{i in A} s_ij over the retained sparse entries.
class FacilityLocation : public SetObjective {
 public:
  explicit FacilityLocation(std::shared_ptr<const SparseSimilarity> sim);

  Index ground_size() const override { return sim_->size(); }
  std::string name() const override { return "facility_location"; }
  double value() const override { return value_; }
  double gain(Index s) const override;
  void commit(Index s) override;
  void reset() override;

  const Vector& best() const { return best_; }

 private:
  void check_index(Index s) const;

  std::shared_ptr<const SparseSimilarity> sim_;
  Vector best_;
  double value_ = 0.0;
};

}  // namespace appraise::classic
