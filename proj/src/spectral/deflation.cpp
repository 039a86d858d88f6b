#include "appraise/spectral/deflation.hpp"

#include <algorithm>
#include <cmath>

#include "appraise/errors.hpp"

namespace appraise::spectral {

void DeflationPlan::clear() {
  groups.clear();
  active.clear();
  preserved.clear();
  size = 0;
}

void deflate(const Vector& eigvals, const Vector& v, const DeflationTolerances& tol,
             DeflationPlan& plan) {
  if (eigvals.size() != v.size()) {
    throw InvalidArgument("deflate: eigenvalue and weight lengths differ");
  }
  plan.clear();
  const Index n = static_cast<Index>(eigvals.size());
  plan.size = n;
  std::vector<double> pole_buf;
  std::vector<double> weight_buf;
  std::vector<double> flip_buf;
  pole_buf.reserve(n);
  weight_buf.reserve(n);
  flip_buf.reserve(n);
  if (n == 0) {
    plan.poles.resize(0);
    plan.weights.resize(0);
    plan.sign_flips.resize(0);
    return;
  }

  const double vnorm = v.norm();
  const double weight_tol = tol.weight * vnorm;
  const double lmax = std::max(std::abs(eigvals[0]), std::abs(eigvals[n - 1]));
  const double eq_tol = tol.eig_equal * std::max(1.0, lmax);

  auto push_active = [&](Index i, double signed_weight) {
    plan.active.push_back(i);
    pole_buf.push_back(eigvals[i]);
    weight_buf.push_back(std::abs(signed_weight));
    flip_buf.push_back(signed_weight < 0.0 ? -1.0 : 1.0);
  };

  Index start = 0;
  while (start < n) {
    Index end = start + 1;
    while (end < n && eigvals[end] - eigvals[start] <= eq_tol) ++end;
    const Index len = end - start;

    if (len == 1) {
      if (std::abs(v[start]) > weight_tol) {
        push_active(start, v[start]);
      } else {
        plan.preserved.push_back(start);
      }
    } else {
      DeflationGroup g;
      g.members.resize(len);
      for (Index k = 0; k < len; ++k) g.members[k] = start + k;
      const Vector sub = v.segment(start, len);
      g.weight_norm = sub.norm();
      if (g.weight_norm > weight_tol) {
        g.reflected = true;
        g.reflector = householder_toward_axis(sub);
        g.pivot = start + g.reflector.pivot;
        for (Index k = 0; k < len; ++k) {
          if (start + k == g.pivot) {
            // H v_E = -sign * alpha * e_pivot
            push_active(g.pivot, -g.reflector.sign * g.weight_norm);
          } else {
            plan.preserved.push_back(start + k);
          }
        }
      } else {
        for (Index k = 0; k < len; ++k) plan.preserved.push_back(start + k);
      }
      plan.groups.push_back(std::move(g));
    }
    start = end;
  }

  plan.poles = Eigen::Map<const Vector>(pole_buf.data(), static_cast<Eigen::Index>(pole_buf.size()));
  plan.weights =
      Eigen::Map<const Vector>(weight_buf.data(), static_cast<Eigen::Index>(weight_buf.size()));
  plan.sign_flips =
      Eigen::Map<const Vector>(flip_buf.data(), static_cast<Eigen::Index>(flip_buf.size()));
}

DeflationPlan deflate(const Vector& eigvals, const Vector& v, const DeflationTolerances& tol) {
  DeflationPlan plan;
  deflate(eigvals, v, tol, plan);
  return plan;
}

}  // namespace appraise::spectral
