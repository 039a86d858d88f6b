#include "appraise/spectral/secular.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "appraise/errors.hpp"

namespace appraise::spectral {

namespace {

constexpr double kEpsilon = std::numeric_limits<double>::epsilon();

struct Evaluation {
  double value = 0.0;       // f
  double left_deriv = 0.0;  // derivative of the terms with pole <= left
  double right_deriv = 0.0;
  double abs_sum = 0.0;     // 1 + sum |terms|, rounding scale of f
};

// Terms of f at offset tau from poles[origin]; delta[j] = poles[j] - poles[origin].
Evaluation evaluate(const Vector& delta, const Vector& zsq, double tau, Index left) {
  Evaluation e;
  double left_sum = 0.0;
  double right_sum = 0.0;
  const Index n = static_cast<Index>(delta.size());
  for (Index j = 0; j < n; ++j) {
    const double q = 1.0 / (delta[j] - tau);
    const double term = zsq[j] * q;
    if (j <= left) {
      left_sum += term;
      e.left_deriv += term * q;
    } else {
      right_sum += term;
      e.right_deriv += term * q;
    }
    e.abs_sum += std::abs(term);
  }
  e.value = 1.0 + left_sum + right_sum;
  e.abs_sum += 1.0;
  return e;
}

// Correction eta from the two-pole rational surrogate that matches f and the
// split derivatives at tau. Returns NaN when the surrogate has no usable root.
double surrogate_step(const Evaluation& e, double delta_left, double delta_right) {
  const double w = e.value;
  const double c = w - delta_left * e.left_deriv - delta_right * e.right_deriv;
  const double a = (delta_left + delta_right) * w - delta_left * delta_right * (e.left_deriv + e.right_deriv);
  const double b = delta_left * delta_right * w;
  if (c == 0.0) {
    return a != 0.0 ? b / a : std::numeric_limits<double>::quiet_NaN();
  }
  const double disc = std::sqrt(std::abs(a * a - 4.0 * b * c));
  const double r1 = a >= 0.0 ? (a + disc) / (2.0 * c) : (a - disc) / (2.0 * c);
  const double r2 = a >= 0.0 ? 2.0 * b / (a + disc) : 2.0 * b / (a - disc);
  const bool ok1 = std::isfinite(r1) && r1 > delta_left && r1 < delta_right;
  const bool ok2 = std::isfinite(r2) && r2 > delta_left && r2 < delta_right;
  if (ok1 && ok2) return std::abs(r1) < std::abs(r2) ? r1 : r2;
  if (ok1) return r1;
  if (ok2) return r2;
  return std::numeric_limits<double>::quiet_NaN();
}

// Surrogate for the last root: only poles to the left.
double surrogate_step_last(const Evaluation& e, double delta_left) {
  const double deriv = e.left_deriv + e.right_deriv;
  const double c = e.value - delta_left * deriv;
  if (!(c > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  return delta_left + delta_left * delta_left * deriv / c;
}

}  // namespace

double secular_value(const SecularProblem& problem, Index origin, double offset) {
  const Vector delta = problem.poles.array() - problem.poles[static_cast<Eigen::Index>(origin)];
  const Vector zsq = problem.rho * problem.weights.array().square();
  return evaluate(delta, zsq, offset, origin).value;
}

SecularSolution secular_roots(const SecularProblem& problem, const SecularOptions& options) {
  const Index n = static_cast<Index>(problem.poles.size());
  if (static_cast<Index>(problem.weights.size()) != n) {
    throw InvalidArgument("secular_roots: poles and weights differ in length");
  }
  if (!(problem.rho > 0.0)) {
    throw InvalidArgument("secular_roots: rho must be positive");
  }
  SecularSolution sol;
  sol.origin.resize(n);
  sol.offset.resize(static_cast<Eigen::Index>(n));
  sol.roots.resize(static_cast<Eigen::Index>(n));
  if (n == 0) return sol;

  const Vector zsq = problem.rho * problem.weights.array().square();
  const double total = zsq.sum();
  const Vector& d = problem.poles;

  if (n == 1) {
    sol.origin[0] = 0;
    sol.offset[0] = total;
    sol.roots[0] = d[0] + total;
    return sol;
  }

  Vector delta(static_cast<Eigen::Index>(n));
  for (Index i = 0; i < n; ++i) {
    const bool last = (i == n - 1);
    const double gap = last ? total : d[i + 1] - d[i];

    // Pick the closer end of the interval as origin.
    Index origin = i;
    double lo = 0.0;
    double hi = gap;
    if (!last) {
      const double half = 0.5 * gap;
      for (Index j = 0; j < n; ++j) delta[j] = d[j] - d[i];
      const double f_mid = evaluate(delta, zsq, half, i).value;
      if (f_mid >= 0.0) {
        hi = half;
      } else {
        origin = i + 1;
        lo = -half;
        hi = 0.0;
      }
    }
    for (Index j = 0; j < n; ++j) delta[j] = d[j] - d[origin];

    const double delta_left_pole = delta[i];
    const double delta_right_pole = last ? 0.0 : delta[i + 1];

    double tau = 0.5 * (lo + hi);
    bool converged = false;
    int it = 0;
    for (; it < options.max_iterations; ++it) {
      const Evaluation e = evaluate(delta, zsq, tau, i);
      if (e.value < 0.0) {
        lo = tau;
      } else {
        hi = tau;
      }
      const double deriv = e.left_deriv + e.right_deriv;
      if (e.value == 0.0 || std::abs(e.value) <= 8.0 * kEpsilon * e.abs_sum ||
          std::abs(e.value) <= options.residual * (1.0 + deriv * std::abs(tau))) {
        converged = true;
        break;
      }
      const double scale = std::min(gap, std::max(std::abs(lo), std::abs(hi)));
      if (hi - lo <= 8.0 * kEpsilon * scale) {
        tau = 0.5 * (lo + hi);
        converged = true;
        break;
      }
      const double dl = delta_left_pole - tau;
      const double eta = last ? surrogate_step_last(e, dl)
                              : surrogate_step(e, dl, delta_right_pole - tau);
      double next = tau + eta;
      if (!std::isfinite(eta) || !(next > lo && next < hi)) {
        next = 0.5 * (lo + hi);
      }
      if (next == tau) {
        converged = true;
        break;
      }
      tau = next;
    }
    if (!converged) {
      std::ostringstream msg;
      msg << "secular_roots: no convergence for root " << i << " in interval (" << d[i] << ", "
          << (last ? d[i] + total : d[i + 1]) << ") after " << options.max_iterations
          << " iterations";
      throw NumericalFailure(msg.str());
    }
    sol.max_iterations_used = std::max(sol.max_iterations_used, it + 1);
    sol.origin[i] = origin;
    sol.offset[i] = tau;
    sol.roots[i] = d[origin] + tau;
  }
  return sol;
}

namespace {

// w_i^2 = prod_k (mu_k - d_i) / prod_{k != i} (d_k - d_i), paired term by term.
template <class Diff>
Vector loewner_from_differences(const Vector& poles, Index n, Diff root_minus_pole) {
  Vector w(static_cast<Eigen::Index>(n));
  for (Index i = 0; i < n; ++i) {
    double prod = root_minus_pole(i, i);
    for (Index k = 0; k < n; ++k) {
      if (k == i) continue;
      prod *= root_minus_pole(k, i) / (poles[k] - poles[i]);
    }
    if (!(prod > 0.0) || !std::isfinite(prod)) {
      std::ostringstream msg;
      msg << "loewner_weights: interlacing violated at coordinate " << i;
      throw NumericalFailure(msg.str());
    }
    w[i] = std::sqrt(prod);
  }
  return w;
}

}  // namespace

Vector loewner_weights(const Vector& old_eigvals, const Vector& new_eigvals) {
  const Index n = static_cast<Index>(old_eigvals.size());
  if (static_cast<Index>(new_eigvals.size()) != n) {
    throw InvalidArgument("loewner_weights: length mismatch");
  }
  for (Index i = 0; i < n; ++i) {
    const bool below = new_eigvals[i] > old_eigvals[i];
    const bool above = (i + 1 == n) || new_eigvals[i] < old_eigvals[i + 1];
    if (!below || !above) {
      std::ostringstream msg;
      msg << "loewner_weights: interlacing violated at coordinate " << i;
      throw NumericalFailure(msg.str());
    }
  }
  return loewner_from_differences(old_eigvals, n, [&](Index k, Index i) {
    return new_eigvals[k] - old_eigvals[i];
  });
}

Vector loewner_weights(const Vector& poles, const SecularSolution& solution) {
  const Index n = static_cast<Index>(poles.size());
  return loewner_from_differences(poles, n, [&](Index k, Index i) {
    return -solution.pole_minus_root(poles, i, k);
  });
}

}  // namespace appraise::spectral
