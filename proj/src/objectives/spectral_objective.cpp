#include "appraise/objectives/spectral_objective.hpp"

#include <cmath>
#include <sstream>

#include "appraise/errors.hpp"
#include "appraise/spectral/dense_oracle.hpp"

namespace appraise::objectives {

std::string to_string(Normalization n) {
  switch (n) {
    case Normalization::none: return "none";
    case Normalization::density_trace1: return "trace1";
    case Normalization::monotone_e_lambda_max: return "emax";
  }
  return "none";
}

namespace {

constexpr double kTiny = 1e-300;

double clamp_eig(double x) { return x < kTiny ? 0.0 : x; }

void require_finite_phi0(const Phi& phi) {
  if (!std::isfinite(phi.value(0.0))) {
    throw InvalidArgument("spectral objective: " + phi.name() +
                          " is not finite at 0; use a positive shift");
  }
}

}  // namespace

SpectralObjective::SpectralObjective(std::shared_ptr<const DesignMatrix> design, Phi phi,
                                     Normalization normalization, spectral::StateTolerances tol)
    : design_(std::move(design)),
      phi_(phi),
      normalization_(normalization),
      tol_(tol),
      state_(static_cast<Index>(design_->cols()), tol),
      phi_zero_(phi.value(0.0)) {
  require_finite_phi0(phi_);
  clear_selection();
}

std::string SpectralObjective::name() const {
  return "spectral[" + phi_.name() + ", " + to_string(normalization_) + "]";
}

double SpectralObjective::phi_clamped(double x) const { return phi_.value(clamp_eig(x)); }

double SpectralObjective::raw_value() const {
  CompensatedSum sum;
  for (Eigen::Index i = 0; i < state_.eigvals().size(); ++i) sum.add(phi_clamped(state_.eigvals()[i]));
  sum.add(static_cast<double>(state_.dim() - state_.rank()) * phi_zero_);
  return sum.result();
}

double SpectralObjective::empty_value() const {
  return static_cast<double>(state_.dim()) * phi_zero_;
}

double SpectralObjective::value() const {
  CompensatedSum sum;
  for (Eigen::Index i = 0; i < state_.eigvals().size(); ++i) {
    sum.add(phi_clamped(state_.eigvals()[i]));
    sum.add(-phi_zero_);
  }
  return sum.result();
}

double SpectralObjective::delta_value(const spectral::SpectralDelta& d) const {
  CompensatedSum sum;
  for (double x : d.added) sum.add(phi_clamped(x));
  for (double x : d.removed) sum.add(-phi_clamped(x));
  return sum.result();
}

void SpectralObjective::check_index(Index s) const {
  if (s >= ground_size()) {
    std::ostringstream msg;
    msg << "element " << s << " outside ground set of size " << ground_size();
    throw InvalidArgument(msg.str());
  }
}

double SpectralObjective::gain(Index s) const {
  check_index(s);
  thread_local spectral::QueryWorkspace ws;
  const Vector u = design_->row(static_cast<Eigen::Index>(s)).transpose();
  return delta_value(state_.query(u, Update::add, ws));
}

double SpectralObjective::removal_gain(Index s) const {
  check_index(s);
  if (!contains(s)) throw InvalidArgument("removal_gain: element is not in the current set");
  thread_local spectral::QueryWorkspace ws;
  const Vector u = design_->row(static_cast<Eigen::Index>(s)).transpose();
  return delta_value(state_.query(u, Update::remove, ws));
}

void SpectralObjective::commit(Index s) {
  check_index(s);
  if (contains(s)) throw InvalidArgument("commit: element already selected");
  const Vector u = design_->row(static_cast<Eigen::Index>(s)).transpose();
  state_.commit(u, Update::add);
  mark_selected(s);
}

void SpectralObjective::uncommit(Index s) {
  check_index(s);
  if (!contains(s)) throw InvalidArgument("uncommit: element is not in the current set");
  const Vector u = design_->row(static_cast<Eigen::Index>(s)).transpose();
  state_.commit(u, Update::remove);
  unmark(s);
}

void SpectralObjective::reset() {
  state_ = spectral::SpectralState(static_cast<Index>(design_->cols()), tol_);
  clear_selection();
}

OracleSpectralObjective::OracleSpectralObjective(std::shared_ptr<const DesignMatrix> design,
                                                 Phi phi)
    : design_(std::move(design)), phi_(phi) {
  require_finite_phi0(phi_);
  reset();
}

std::string OracleSpectralObjective::name() const { return "oracle[" + phi_.name() + "]"; }

double OracleSpectralObjective::value_of(const Matrix& b) const {
  const Vector eig = spectral::dense_eigen_oracle(b);
  const double phi0 = phi_.value(0.0);
  // Rounding leaves the null space with eigenvalues of order eps * lambda_max;
  // treat them as exact zeros like the factored state does.
  const double floor = zero_eigenvalue_ * std::max(eig.size() > 0 ? eig.maxCoeff() : 0.0, 0.0);
  CompensatedSum sum;
  for (Eigen::Index i = 0; i < eig.size(); ++i) {
    sum.add(phi_.value(eig[i] <= floor ? 0.0 : clamp_eig(eig[i])));
    sum.add(-phi0);
  }
  return sum.result();
}

double OracleSpectralObjective::gain(Index s) const {
  if (s >= ground_size()) throw InvalidArgument("oracle gain: element outside ground set");
  thread_local Matrix b;
  const auto x = design_->row(static_cast<Eigen::Index>(s));
  b = gram_;
  b.noalias() += x.transpose() * x;
  return value_of(b) - value_;
}

void OracleSpectralObjective::commit(Index s) {
  if (s >= ground_size()) throw InvalidArgument("oracle commit: element outside ground set");
  if (contains(s)) throw InvalidArgument("oracle commit: element already selected");
  const auto x = design_->row(static_cast<Eigen::Index>(s));
  gram_.noalias() += x.transpose() * x;
  value_ = value_of(gram_);
  mark_selected(s);
}

void OracleSpectralObjective::reset() {
  const auto m = design_->cols();
  gram_ = Matrix::Zero(m, m);
  value_ = 0.0;
  clear_selection();
}

}  // namespace appraise::objectives
