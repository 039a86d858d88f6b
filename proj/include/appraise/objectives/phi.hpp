#pragma once

#include <string>

namespace appraise::objectives {

enum class PhiKind {
  neg_xlogx,  // -(t+x) log(t+x), t >= 0
  log_shift,  // log(t+x), t >= 0
  power,      // x^eta, 0 < eta <= 1
  neg_power,  // -x^eta, 1 <= eta <= 2
  powerlaw,   // beta^-alpha - (x+beta)^-alpha, alpha, beta > 0
  satexp,     // 1 - exp(-x)
  ratio,      // x / (1+x^alpha)^(1/alpha), alpha > 0
};

/// Scalar function applied to each eigenvalue of a matrix spectral objective.
/// Parameters are validated on construction.
class Phi {
 public:
  static Phi neg_xlogx(double t = 0.0);
  static Phi log_shift(double t);
  static Phi power(double eta);
  static Phi neg_power(double eta);
  static Phi powerlaw(double alpha = 1.0, double beta = 1.0);
  static Phi satexp();
  static Phi ratio(double alpha = 1.0);

  PhiKind kind() const { return kind_; }
  double param1() const { return p1_; }
  double param2() const { return p2_; }
  std::string name() const;

  /// x >= 0. neg_xlogx with t = 0 takes phi(0) = 0 by continuity.
  double value(double x) const;
  /// May be +inf at x = 0 (neg_xlogx with t = 0, power with eta < 1).
  double derivative(double x) const;
  double second_derivative(double x) const;

  /// phi(0) == 0
  bool normalized() const;

 private:
  Phi(PhiKind kind, double p1, double p2) : kind_(kind), p1_(p1), p2_(p2) {}

  PhiKind kind_;
  double p1_;
  double p2_;
};

}  // namespace appraise::objectives
