#include "appraise/optimizer/constraint.hpp"

#include <sstream>

#include "appraise/errors.hpp"

namespace appraise::optimizer {

Constraint Constraint::cardinality(Index k) {
  Constraint c;
  c.k_ = k;
  return c;
}

Constraint Constraint::partition(std::vector<Index> block_of, std::vector<Index> quotas) {
  if (block_of.empty()) throw InvalidArgument("partition matroid: empty block assignment");
  Constraint c;
  c.block_of_ = std::move(block_of);
  c.quotas_ = std::move(quotas);
  for (Index q : c.quotas_) c.k_ += q;
  return c;
}

void Constraint::validate(Index n) const {
  if (is_cardinality()) {
    if (k_ < 1 || k_ > n) {
      std::ostringstream msg;
      msg << "cardinality constraint k=" << k_ << " infeasible for ground set of size " << n;
      throw InvalidArgument(msg.str());
    }
    return;
  }
  if (block_of_.size() != n) {
    throw InvalidArgument("partition matroid: block assignment length differs from ground set size");
  }
  std::vector<Index> sizes(quotas_.size(), 0);
  for (Index b : block_of_) {
    if (b >= quotas_.size()) {
      std::ostringstream msg;
      msg << "partition matroid: block " << b << " has no quota";
      throw InvalidArgument(msg.str());
    }
    ++sizes[b];
  }
  for (Index b = 0; b < quotas_.size(); ++b) {
    if (quotas_[b] > 0 && sizes[b] > 0) return;
  }
  throw InvalidArgument("partition matroid: no block admits an element");
}

Constraint::Tracker::Tracker(const Constraint& c) : c_(&c) {
  if (!c.is_cardinality()) {
    used_.assign(c.quotas().size(), 0);
    for (Index q : c.quotas()) open_blocks_ += q > 0 ? 1 : 0;
  }
}

bool Constraint::Tracker::can_add(Index s) const {
  if (c_->is_cardinality()) return size_ < c_->k();
  const Index b = c_->block_of()[s];
  return used_[b] < c_->quotas()[b];
}

void Constraint::Tracker::add(Index s) {
  ++size_;
  if (!c_->is_cardinality()) {
    const Index b = c_->block_of()[s];
    if (++used_[b] == c_->quotas()[b]) --open_blocks_;
  }
}

bool Constraint::Tracker::full() const {
  return c_->is_cardinality() ? size_ >= c_->k() : open_blocks_ == 0;
}

}  // namespace appraise::optimizer
