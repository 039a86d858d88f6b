#include "appraise/spectral/householder.hpp"

#include <cmath>

#include "appraise/errors.hpp"

namespace appraise::spectral {

Reflector householder_toward_axis(Eigen::Ref<const Vector> x) {
  const double norm = x.norm();
  if (!(norm > 0.0)) {
    throw InvalidArgument("householder_toward_axis: zero vector");
  }
  Reflector h;
  Eigen::Index pivot = 0;
  for (Eigen::Index i = 1; i < x.size(); ++i) {
    if (std::abs(x[i]) > std::abs(x[pivot])) pivot = i;
  }
  h.pivot = static_cast<Index>(pivot);
  h.sign = x[pivot] < 0.0 ? -1.0 : 1.0;
  h.w = x;
  h.w[pivot] += h.sign * norm;
  h.w /= h.w.norm();
  return h;
}

void Reflector::apply(Eigen::Ref<Vector> y) const {
  const double t = 2.0 * w.dot(y);
  y -= t * w;
}

void Reflector::apply_right(Eigen::Ref<Matrix> a) const {
  const Vector aw = a * w;
  a.noalias() -= 2.0 * aw * w.transpose();
}

}  // namespace appraise::spectral
