#pragma once

#include <vector>

#include "appraise/types.hpp"

namespace appraise::optimizer {

/// Cardinality |S| <= k, or a partition matroid allowing quota[b] elements of block b.
class Constraint {
 public:
  static Constraint cardinality(Index k);
  static Constraint partition(std::vector<Index> block_of, std::vector<Index> quotas);

  bool is_cardinality() const { return block_of_.empty(); }
  Index k() const { return k_; }
  const std::vector<Index>& block_of() const { return block_of_; }
  const std::vector<Index>& quotas() const { return quotas_; }

  /// Throws InvalidArgument when the constraint does not fit a ground set of size n
  /// or admits no element at all.
  void validate(Index n) const;

  /// Tracks usage while a set is built.
  class Tracker {
   public:
    explicit Tracker(const Constraint& c);
    bool can_add(Index s) const;
    void add(Index s);
    /// No further element can be added whatever it is.
    bool full() const;
    Index size() const { return size_; }

   private:
    const Constraint* c_;
    std::vector<Index> used_;
    Index size_ = 0;
    Index open_blocks_ = 0;
  };

 private:
  Index k_ = 0;
  std::vector<Index> block_of_;
  std::vector<Index> quotas_;
};

}  // namespace appraise::optimizer
