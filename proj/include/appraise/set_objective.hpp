#pragma once

#include <string>
#include <vector>

#include "appraise/types.hpp"

namespace appraise {

/// A stateful set function over the ground set {0, ..., n-1}. The current set
/// grows by commit(); gain() is const and may be called concurrently from
/// several threads as long as no commit() runs at the same time.
class SetObjective {
 public:
  virtual ~SetObjective() = default;

  virtual Index ground_size() const = 0;
  virtual std::string name() const = 0;

  /// f(S) for the committed set S.
  virtual double value() const = 0;
  /// f(S + s) - f(S).
  virtual double gain(Index s) const = 0;
  virtual void commit(Index s) = 0;
  /// Back to the empty set.
  virtual void reset() = 0;

  const std::vector<Index>& selected() const { return selected_; }
  bool contains(Index s) const { return s < in_set_.size() && in_set_[s]; }

  /// f of an arbitrary set; resets the objective first and leaves it holding `set`.
  double evaluate(const std::vector<Index>& set) {
    reset();
    for (Index s : set) commit(s);
    return value();
  }

 protected:
  void mark_selected(Index s) {
    if (in_set_.size() < ground_size()) in_set_.assign(ground_size(), false);
    in_set_[s] = true;
    selected_.push_back(s);
  }
  void unmark(Index s) {
    in_set_[s] = false;
    std::erase(selected_, s);
  }
  void clear_selection() {
    selected_.clear();
    in_set_.assign(ground_size(), false);
  }

 private:
  std::vector<Index> selected_;
  std::vector<bool> in_set_;
};

}  // namespace appraise
