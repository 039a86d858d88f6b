#include "appraise/objectives/phi.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "appraise/errors.hpp"

namespace appraise::objectives {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const char* what) {
  if (!ok) throw InvalidArgument(what);
}

}  // namespace

Phi Phi::neg_xlogx(double t) {
  require(t >= 0.0 && std::isfinite(t), "neg_xlogx: t must be >= 0");
  return {PhiKind::neg_xlogx, t, 0.0};
}

Phi Phi::log_shift(double t) {
  require(t >= 0.0 && std::isfinite(t), "log_shift: t must be >= 0");
  return {PhiKind::log_shift, t, 0.0};
}

Phi Phi::power(double eta) {
  require(eta > 0.0 && eta <= 1.0, "power: eta must lie in (0, 1]");
  return {PhiKind::power, eta, 0.0};
}

Phi Phi::neg_power(double eta) {
  require(eta >= 1.0 && eta <= 2.0, "neg_power: eta must lie in [1, 2]");
  return {PhiKind::neg_power, eta, 0.0};
}

Phi Phi::powerlaw(double alpha, double beta) {
  require(alpha > 0.0 && std::isfinite(alpha), "powerlaw: alpha must be > 0");
  require(beta > 0.0 && std::isfinite(beta), "powerlaw: beta must be > 0");
  return {PhiKind::powerlaw, alpha, beta};
}

Phi Phi::satexp() { return {PhiKind::satexp, 0.0, 0.0}; }

Phi Phi::ratio(double alpha) {
  require(alpha > 0.0 && std::isfinite(alpha), "ratio: alpha must be > 0");
  return {PhiKind::ratio, alpha, 0.0};
}

std::string Phi::name() const {
  std::ostringstream os;
  switch (kind_) {
    case PhiKind::neg_xlogx: os << "neg_xlogx(t=" << p1_ << ")"; break;
    case PhiKind::log_shift: os << "log_shift(t=" << p1_ << ")"; break;
    case PhiKind::power: os << "power(eta=" << p1_ << ")"; break;
    case PhiKind::neg_power: os << "neg_power(eta=" << p1_ << ")"; break;
    case PhiKind::powerlaw: os << "powerlaw(alpha=" << p1_ << ",beta=" << p2_ << ")"; break;
    case PhiKind::satexp: os << "satexp"; break;
    case PhiKind::ratio: os << "ratio(alpha=" << p1_ << ")"; break;
  }
  return os.str();
}

double Phi::value(double x) const {
  switch (kind_) {
    case PhiKind::neg_xlogx: {
      const double y = p1_ + x;
      return y == 0.0 ? 0.0 : -y * std::log(y);
    }
    case PhiKind::log_shift:
      return std::log(p1_ + x);
    case PhiKind::power:
      return std::pow(x, p1_);
    case PhiKind::neg_power:
      return -std::pow(x, p1_);
    case PhiKind::powerlaw:
      return std::pow(p2_, -p1_) - std::pow(x + p2_, -p1_);
    case PhiKind::satexp:
      return -std::expm1(-x);
    case PhiKind::ratio:
      return x / std::pow(1.0 + std::pow(x, p1_), 1.0 / p1_);
  }
  return 0.0;
}

double Phi::derivative(double x) const {
  switch (kind_) {
    case PhiKind::neg_xlogx: {
      const double y = p1_ + x;
      return y == 0.0 ? kInf : -std::log(y) - 1.0;
    }
    case PhiKind::log_shift:
      return 1.0 / (p1_ + x);
    case PhiKind::power:
      return x == 0.0 && p1_ < 1.0 ? kInf : p1_ * std::pow(x, p1_ - 1.0);
    case PhiKind::neg_power:
      return -p1_ * std::pow(x, p1_ - 1.0);
    case PhiKind::powerlaw:
      return p1_ * std::pow(x + p2_, -p1_ - 1.0);
    case PhiKind::satexp:
      return std::exp(-x);
    case PhiKind::ratio:
      return std::pow(1.0 + std::pow(x, p1_), -1.0 / p1_ - 1.0);
  }
  return 0.0;
}

double Phi::second_derivative(double x) const {
  switch (kind_) {
    case PhiKind::neg_xlogx: {
      const double y = p1_ + x;
      return y == 0.0 ? -kInf : -1.0 / y;
    }
    case PhiKind::log_shift: {
      const double y = p1_ + x;
      return -1.0 / (y * y);
    }
    case PhiKind::power:
      if (p1_ == 1.0) return 0.0;
      return x == 0.0 ? -kInf : p1_ * (p1_ - 1.0) * std::pow(x, p1_ - 2.0);
    case PhiKind::neg_power:
      if (p1_ == 1.0) return 0.0;
      if (x == 0.0 && p1_ < 2.0) return -kInf;
      return -p1_ * (p1_ - 1.0) * std::pow(x, p1_ - 2.0);
    case PhiKind::powerlaw:
      return -p1_ * (p1_ + 1.0) * std::pow(x + p2_, -p1_ - 2.0);
    case PhiKind::satexp:
      return -std::exp(-x);
    case PhiKind::ratio: {
      // d/dx (1+x^a)^(-1/a-1) = -(1+a) x^(a-1) (1+x^a)^(-1/a-2)
      if (x == 0.0) return p1_ < 1.0 ? -kInf : (p1_ == 1.0 ? -2.0 : 0.0);
      const double xa = std::pow(x, p1_);
      return -(1.0 + p1_) * std::pow(x, p1_ - 1.0) * std::pow(1.0 + xa, -1.0 / p1_ - 2.0);
    }
  }
  return 0.0;
}

bool Phi::normalized() const { return value(0.0) == 0.0; }

}  // namespace appraise::objectives
