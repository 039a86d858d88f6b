#include "appraise/classic/scaling_law.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "appraise/errors.hpp"

namespace appraise::classic {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw InvalidArgument(std::string("scaling law: ") + what + " must be finite and > 0");
  }
}

}  // namespace

void ChinchillaLaw::validate() const {
  require_positive(b, "b");
  require_positive(beta, "beta");
  if (empty_floor < 0.0) throw InvalidArgument("scaling law: empty_floor must be >= 0");
}

double ChinchillaLaw::value(double d) const {
  if (d < 0.0) throw InvalidArgument("scaling law: size must be >= 0");
  if (d == 0.0) {
    if (empty_floor == 0.0) return -kInf;
    d = empty_floor;
  }
  return c_prime - b * std::pow(d, -beta);
}

void ClusterLaw::validate() const {
  if (c.size() != beta.size() || c.empty()) {
    throw InvalidArgument("scaling law: cluster c and beta must be non-empty and of equal length");
  }
  for (double x : beta) require_positive(x, "cluster beta");
  for (double x : c) {
    if (!(x >= 0.0)) throw InvalidArgument("scaling law: cluster offsets must be >= 0");
  }
}

double ClusterLaw::value(const std::vector<double>& counts) const {
  if (counts.size() != c.size()) throw InvalidArgument("scaling law: one count per domain expected");
  double loss = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (counts[i] < 0.0) throw InvalidArgument("scaling law: counts must be >= 0");
    const double base = c[i] + counts[i];
    loss += base == 0.0 ? kInf : std::pow(base, -beta[i]);
  }
  return c_prime - loss;
}

void EpochLaw::validate() const {
  require_positive(b, "b");
  require_positive(beta, "beta");
  require_positive(budget, "compute budget");
  require_positive(half_life, "half-life");
}

double EpochLaw::beta_j(double j) const { return beta * std::pow(0.5, (j - 1.0) / half_life); }

double EpochLaw::loss(double d) const {
  validate();
  if (d < 0.0) throw InvalidArgument("scaling law: size must be >= 0");
  if (d == 0.0) return kInf;
  if (d >= budget) return b * std::pow(budget, -beta);
  const double kbar = std::floor(budget / d);
  const double bk = beta_j(kbar + 1.0);
  double log_loss = std::log(b) + (-beta + bk) * std::log(d) - bk * std::log(budget / kbar);
  for (double j = 2.0; j <= kbar; j += 1.0) log_loss -= beta_j(j) * std::log(j / (j - 1.0));
  return std::exp(log_loss);
}

ScalingLawObjective::ScalingLawObjective(Index n, ChinchillaLaw law)
    : variant_(Variant::chinchilla), n_(n), chinchilla_(law) {
  law.validate();
  reset();
}

ScalingLawObjective::ScalingLawObjective(Index n, EpochLaw law)
    : variant_(Variant::epoch), n_(n), epoch_(law) {
  law.validate();
  reset();
}

ScalingLawObjective::ScalingLawObjective(std::vector<Index> domain_of, ClusterLaw law)
    : variant_(Variant::cluster), n_(domain_of.size()), cluster_(std::move(law)),
      domain_of_(std::move(domain_of)) {
  cluster_.validate();
  for (Index d : domain_of_) {
    if (d >= cluster_.c.size()) throw InvalidArgument("scaling law: domain id out of range");
  }
  reset();
}

std::string ScalingLawObjective::name() const {
  switch (variant_) {
    case Variant::chinchilla: return "scaling_law[chinchilla]";
    case Variant::cluster: return "scaling_law[cluster]";
    case Variant::epoch: return "scaling_law[epoch]";
  }
  return "scaling_law";
}

double ScalingLawObjective::value_at(const std::vector<double>& counts) const {
  switch (variant_) {
    case Variant::chinchilla: return chinchilla_.value(counts[0]);
    case Variant::epoch: return epoch_.value(counts[0]);
    case Variant::cluster: return cluster_.value(counts);
  }
  return 0.0;
}

double ScalingLawObjective::value() const { return value_at(counts_); }

double ScalingLawObjective::gain(Index s) const {
  if (s >= n_) throw InvalidArgument("scaling law: element outside ground set");
  std::vector<double> next = counts_;
  next[variant_ == Variant::cluster ? domain_of_[s] : 0] += 1.0;
  const double before = value_at(counts_);
  const double after = value_at(next);
  if (std::isinf(before) && before < 0.0) return std::isinf(after) ? 0.0 : kInf;
  return after - before;
}

void ScalingLawObjective::commit(Index s) {
  if (s >= n_) throw InvalidArgument("scaling law: element outside ground set");
  if (contains(s)) throw InvalidArgument("scaling law: element already selected");
  counts_[variant_ == Variant::cluster ? domain_of_[s] : 0] += 1.0;
  mark_selected(s);
}

void ScalingLawObjective::reset() {
  counts_.assign(variant_ == Variant::cluster ? cluster_.c.size() : 1, 0.0);
  clear_selection();
}

}  // namespace appraise::classic
