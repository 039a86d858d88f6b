#include "appraise/classic/facility_location.hpp"

#include <algorithm>
#include <sstream>

#include "appraise/errors.hpp"

namespace appraise::classic {

FacilityLocation::FacilityLocation(std::shared_ptr<const SparseSimilarity> sim) : sim_(std::move(sim)) {
  reset();
}

void FacilityLocation::check_index(Index s) const {
  if (s >= ground_size()) {
    std::ostringstream msg;
    msg << "facility location: element " << s << " outside ground set of size " << ground_size();
    throw InvalidArgument(msg.str());
  }
}

double FacilityLocation::gain(Index s) const {
  check_index(s);
  double g = 0.0;
  for (const SimEntry& e : sim_->row(s)) g += std::max(0.0, e.value - best_[e.index]);
  return g;
}

void FacilityLocation::commit(Index s) {
  check_index(s);
  if (contains(s)) throw InvalidArgument("facility location: element already selected");
  for (const SimEntry& e : sim_->row(s)) {
    double& b = best_[e.index];
    if (e.value > b) {
      value_ += e.value - b;
      b = e.value;
    }
  }
  mark_selected(s);
}

void FacilityLocation::reset() {
  best_ = Vector::Zero(static_cast<Eigen::Index>(sim_->size()));
  value_ = 0.0;
  clear_selection();
}

}  // namespace appraise::classic
