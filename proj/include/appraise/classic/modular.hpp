#pragma once

#include <vector>

#include "appraise/set_objective.hpp"

namespace appraise::classic {

/// f(A) = sum_{i in A} w_i
class ModularObjective : public SetObjective {
 public:
  explicit ModularObjective(std::vector<double> weights) : w_(std::move(weights)) { reset(); }

  Index ground_size() const override { return w_.size(); }
  std::string name() const override { return "modular"; }
  double value() const override { return value_; }
  double gain(Index s) const override { return w_.at(s); }
  void commit(Index s) override {
    value_ += w_.at(s);
    mark_selected(s);
  }
  void reset() override {
    value_ = 0.0;
    clear_selection();
  }

 private:
  std::vector<double> w_;
  double value_ = 0.0;
};

}  // namespace appraise::classic
