#include "appraise/spectral/spectral_state.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "appraise/errors.hpp"

namespace appraise::spectral {

namespace {

Eigen::Index ei(Index i) { return static_cast<Eigen::Index>(i); }

void check_interlacing(const SpectralDelta& d, double sign, double scale) {
#ifndef NDEBUG
  const double slack = 1e-9 * std::max(scale, 1e-300);
  const std::size_t n = d.removed.size();
  for (std::size_t i = 0; i < n; ++i) {
    // Ascending in both lists for updates; downdates mirror.
    const double lo = sign > 0 ? d.removed[i] : (i == 0 ? -INFINITY : d.removed[i - 1]);
    const double hi = sign > 0 ? (i + 1 < n ? d.removed[i + 1] : INFINITY) : d.removed[i];
    if (d.added[i] < lo - slack || d.added[i] > hi + slack) {
      throw NumericalFailure("rank-one update violated eigenvalue interlacing");
    }
  }
#else
  (void)d;
  (void)sign;
  (void)scale;
#endif
}

}  // namespace

SpectralState::SpectralState(Index dim, StateTolerances tol)
    : dim_(dim), q_(ei(dim), 0), eigvals_(0), tol_(tol) {
  if (dim == 0) throw InvalidArgument("SpectralState: dimension must be positive");
}

SpectralState SpectralState::from_factorization(Matrix q, Vector eigvals, StateTolerances tol) {
  if (q.cols() != eigvals.size()) {
    throw InvalidArgument("from_factorization: eigenvector/eigenvalue count mismatch");
  }
  if (q.cols() > q.rows()) {
    throw InvalidArgument("from_factorization: rank exceeds dimension");
  }
  for (Eigen::Index i = 0; i < eigvals.size(); ++i) {
    if (!(eigvals[i] > 0.0) || (i > 0 && eigvals[i] < eigvals[i - 1])) {
      throw InvalidArgument("from_factorization: eigenvalues must be positive and ascending");
    }
  }
  SpectralState s(static_cast<Index>(q.rows()), tol);
  s.q_ = std::move(q);
  s.eigvals_ = std::move(eigvals);
  s.trace_accum_ = s.eigvals_.sum();
  return s;
}

RankOneQuery SpectralState::project(Eigen::Ref<const Vector> u, Update direction) const {
  if (static_cast<Index>(u.size()) != dim_) {
    throw InvalidArgument("project: vector length does not match state dimension");
  }
  RankOneQuery r;
  r.direction = direction;
  r.v = q_.transpose() * u;
  r.u_norm = u.norm();
  r.u_perp_norm = (u - q_ * r.v).norm();
  return r;
}

// Fills ws.poles / ws.weights with the working problem. Working coordinates are
// the (possibly extended) eigen-coordinates, reversed and negated for downdates
// so that the secular solver always sees rho = +1 and ascending poles.
void SpectralState::prepare(Eigen::Ref<const Vector> u, Update direction, QueryWorkspace& ws,
                            bool& rank_increase, double& scale) const {
  if (static_cast<Index>(u.size()) != dim_) {
    throw InvalidArgument("rank-one update: vector length does not match state dimension");
  }
  const Index r = rank();
  ws.v.noalias() = q_.transpose() * u;
  ws.u_perp = u;
  ws.u_perp.noalias() -= q_ * ws.v;
  const double alpha = ws.u_perp.norm();
  const double unorm = u.norm();
  const double lmax = r > 0 ? eigvals_[ei(r - 1)] : 0.0;
  rank_increase = alpha > tol_.rank_increase * std::max(unorm, std::sqrt(lmax));
  scale = std::max(lmax, unorm * unorm);

  if (direction == Update::remove && rank_increase) {
    std::ostringstream msg;
    msg << "downdate direction lies outside the current column space (residual " << alpha << ")";
    throw PsdViolation(msg.str());
  }

  const Index n = r + (rank_increase ? 1 : 0);
  ws.poles.resize(ei(n));
  ws.weights.resize(ei(n));
  const Index shift = rank_increase ? 1 : 0;
  if (direction == Update::add) {
    if (rank_increase) {
      ws.poles[0] = 0.0;
      ws.weights[0] = alpha;
    }
    ws.poles.segment(ei(shift), ei(r)) = eigvals_;
    ws.weights.segment(ei(shift), ei(r)) = ws.v;
  } else {
    for (Index k = 0; k < r; ++k) {
      ws.poles[ei(k)] = -eigvals_[ei(r - 1 - k)];
      ws.weights[ei(k)] = ws.v[ei(r - 1 - k)];
    }
  }
}

const SpectralDelta& SpectralState::query(Eigen::Ref<const Vector> u, Update direction,
                                          QueryWorkspace& ws) const {
  SpectralDelta& out = ws.delta;
  out.removed.clear();
  out.added.clear();
  out.new_rank = rank();
  if (u.squaredNorm() == 0.0) return out;

  bool rank_increase = false;
  double scale = 0.0;
  prepare(u, direction, ws, rank_increase, scale);
  deflate(ws.poles, ws.weights, tol_.deflation, ws.plan);
  const Index na = static_cast<Index>(ws.plan.active.size());
  if (na == 0) return out;

  const SecularSolution sol =
      secular_roots(SecularProblem{ws.plan.poles, ws.plan.weights, 1.0}, tol_.secular);
  const double s = sign_of(direction);
  out.removed.resize(na);
  out.added.resize(na);
  Index zeros = 0;
  for (Index k = 0; k < na; ++k) {
    out.removed[k] = s * ws.plan.poles[ei(k)];
    out.added[k] = s * sol.roots[ei(k)];
  }
  if (direction == Update::remove) {
    // Downdate roots come back descending after un-negation.
    std::reverse(out.removed.begin(), out.removed.end());
    std::reverse(out.added.begin(), out.added.end());
    for (double& x : out.added) {
      if (x <= tol_.zero_eigenvalue * scale) {
        if (x < -tol_.psd_violation * scale) {
          std::ostringstream msg;
          msg << "downdate produced negative eigenvalue " << x;
          throw PsdViolation(msg.str());
        }
        x = 0.0;
        ++zeros;
      }
    }
  }
  if (rank_increase && !ws.plan.preserved.empty() && ws.plan.preserved.front() == 0) {
    // The new zero pole was absorbed into a cluster of near-zero eigenvalues.
    ++zeros;
  }
  out.new_rank = rank() + (rank_increase ? 1 : 0) - zeros;
  check_interlacing(out, s, scale);
  return out;
}

SpectrumAfterUpdate SpectralState::eigenvalues_after_rank_one(Eigen::Ref<const Vector> u,
                                                              Update direction) const {
  QueryWorkspace ws;
  const SpectralDelta& d = query(u, direction, ws);
  SpectrumAfterUpdate out;
  out.rank = d.new_rank;
  if (d.added.empty()) {
    out.eigvals = eigvals_;
    return out;
  }
  const double s = sign_of(direction);
  std::vector<double> vals;
  vals.reserve(ws.plan.size);
  for (Index p : ws.plan.preserved) {
    const double x = s * ws.poles[ei(p)];
    if (x > 0.0) vals.push_back(x);
  }
  for (double x : d.added) {
    if (x > 0.0) vals.push_back(x);
  }
  std::sort(vals.begin(), vals.end());
  out.eigvals = Eigen::Map<const Vector>(vals.data(), ei(vals.size()));
  return out;
}

void SpectralState::commit(Eigen::Ref<const Vector> u, Update direction) {
  if (static_cast<Index>(u.size()) != dim_) {
    throw InvalidArgument("commit: vector length does not match state dimension");
  }
  if (u.squaredNorm() == 0.0) return;

  QueryWorkspace ws;
  bool rank_increase = false;
  double scale = 0.0;
  prepare(u, direction, ws, rank_increase, scale);

  const Index r = rank();
  Matrix qext;
  if (rank_increase) {
    // Second Gram-Schmidt pass so the new column is orthogonal to working precision.
    const Vector c = q_.transpose() * ws.u_perp;
    ws.u_perp.noalias() -= q_ * c;
    ws.v += c;
    const double alpha = ws.u_perp.norm();
    ws.poles[0] = 0.0;
    ws.weights[0] = alpha;
    ws.weights.segment(1, ei(r)) = ws.v;
    qext.resize(ei(dim_), ei(r + 1));
    qext.col(0) = ws.u_perp / alpha;
    qext.rightCols(ei(r)) = q_;
  } else {
    qext = q_;
  }
  const Index n = static_cast<Index>(ws.poles.size());
  const bool down = direction == Update::remove;
  auto col_of = [&](Index k) { return down ? n - 1 - k : k; };

  DeflationPlan& plan = ws.plan;
  deflate(ws.poles, ws.weights, tol_.deflation, plan);

  for (const DeflationGroup& g : plan.groups) {
    if (!g.reflected) continue;
    std::vector<Eigen::Index> cols(g.members.size());
    for (std::size_t j = 0; j < g.members.size(); ++j) cols[j] = ei(col_of(g.members[j]));
    Matrix sub = qext(Eigen::all, cols);
    g.reflector.apply_right(sub);
    qext(Eigen::all, cols) = sub;
  }

  const Index na = static_cast<Index>(plan.active.size());
  const double s = sign_of(direction);
  struct Column {
    double value;
    Index source;  // < n: column of qext; >= n: column (source - n) of the rotated block
  };
  std::vector<Column> order;
  order.reserve(n);
  for (Index p : plan.preserved) {
    const double value = s * ws.poles[ei(p)];
    if (value > 0.0) order.push_back({value, col_of(p)});
  }

  Matrix rotated;
  if (na > 0) {
    const SecularSolution sol =
        secular_roots(SecularProblem{plan.poles, plan.weights, 1.0}, tol_.secular);
    const Vector w = loewner_weights(plan.poles, sol);
    Matrix basis(na, na);
    for (Index k = 0; k < na; ++k) {
      for (Index a = 0; a < na; ++a) {
        basis(ei(a), ei(k)) = plan.sign_flips[ei(a)] * w[ei(a)] / sol.pole_minus_root(plan.poles, a, k);
      }
      basis.col(ei(k)).normalize();
    }
    std::vector<Eigen::Index> cols(na);
    for (Index a = 0; a < na; ++a) cols[a] = ei(col_of(plan.active[a]));
    rotated.noalias() = qext(Eigen::all, cols) * basis;
    for (Index k = 0; k < na; ++k) {
      double value = s * sol.roots[ei(k)];
      if (down && value <= tol_.zero_eigenvalue * scale) {
        if (value < -tol_.psd_violation * scale) {
          std::ostringstream msg;
          msg << "downdate produced negative eigenvalue " << value;
          throw PsdViolation(msg.str());
        }
        continue;  // rank drops; eigenvector discarded
      }
      order.push_back({value, n + k});
    }
  }

  std::stable_sort(order.begin(), order.end(),
                   [](const Column& a, const Column& b) { return a.value < b.value; });
  Matrix q_new(ei(dim_), ei(order.size()));
  Vector l_new(ei(order.size()));
  for (std::size_t j = 0; j < order.size(); ++j) {
    l_new[ei(j)] = order[j].value;
    q_new.col(ei(j)) = order[j].source < n ? qext.col(ei(order[j].source))
                                           : rotated.col(ei(order[j].source - n));
  }

  const Index rn = static_cast<Index>(order.size());
  double drift = 0.0;
  if (rn > 0) {
    drift = ((q_new.transpose() * q_new) - Matrix::Identity(ei(rn), ei(rn))).cwiseAbs().maxCoeff();
  }
  if (drift > tol_.orthogonality_failure) {
    std::ostringstream msg;
    msg << "commit: eigenvector orthogonality drift " << drift << " exceeds "
        << tol_.orthogonality_failure;
    throw NumericalFailure(msg.str());
  }

  q_ = std::move(q_new);
  eigvals_ = std::move(l_new);
  ++commits_;
  ++since_reorth_;
  trace_accum_ += s * u.squaredNorm();
  if (drift > tol_.reorth_trigger || since_reorth_ >= tol_.reorth_period) {
    reorthogonalize();
  }
}

double SpectralState::orthogonality_drift() const {
  const Index r = rank();
  if (r == 0) return 0.0;
  return ((q_.transpose() * q_) - Matrix::Identity(ei(r), ei(r))).cwiseAbs().maxCoeff();
}

void SpectralState::reorthogonalize() {
  const Eigen::Index r = q_.cols();
  for (Eigen::Index j = 0; j < r; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      q_.col(j) -= q_.col(i).dot(q_.col(j)) * q_.col(i);
    }
    q_.col(j).normalize();
  }
  since_reorth_ = 0;
}

Matrix SpectralState::reconstruct() const {
  return q_ * eigvals_.asDiagonal() * q_.transpose();
}

Vector SpectralState::full_spectrum() const {
  Vector out = Vector::Zero(ei(dim_));
  out.tail(eigvals_.size()) = eigvals_;
  return out;
}

}  // namespace appraise::spectral
