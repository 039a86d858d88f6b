#include <cmath>
#include <memory>

#include "appraise/errors.hpp"
#include "appraise/objectives/spectral_objective.hpp"
#include "appraise/objectives/vendi.hpp"
#include "appraise/objectives/verification.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace appraise;
using namespace appraise::objectives;

namespace {

std::vector<Phi> all_phis() {
  return {Phi::neg_xlogx(0.0), Phi::neg_xlogx(0.5), Phi::log_shift(1e-3), Phi::log_shift(1.0),
          Phi::power(0.5),     Phi::power(1.0),     Phi::neg_power(1.5),  Phi::powerlaw(1.0, 1.0),
          Phi::powerlaw(2.0, 0.5), Phi::satexp(),   Phi::ratio(0.5),      Phi::ratio(2.0)};
}

// f(X) computed from scratch: dense eigensolve of D[X]^T D[X].
double dense_value(const DesignMatrix& d, const std::vector<Index>& set, const Phi& phi) {
  Matrix b = Matrix::Zero(d.cols(), d.cols());
  for (Index s : set) b += d.row(s).transpose() * d.row(s);
  const Vector e = spectral::dense_eigen_oracle(b);
  const double floor = 1e-12 * std::max(0.0, e.maxCoeff());
  double v = 0.0;
  for (Eigen::Index i = 0; i < e.size(); ++i) v += phi.value(e[i] <= floor ? 0.0 : e[i]) - phi.value(0.0);
  return v;
}

std::shared_ptr<const DesignMatrix> shared(DesignMatrix d) {
  return std::make_shared<const DesignMatrix>(std::move(d));
}

}  // namespace

TEST_CASE("phi closed forms") {
  CHECK(Phi::neg_xlogx(0.0).value(0.5) == doctest::Approx(0.5 * std::log(2.0)));
  CHECK(Phi::neg_xlogx(0.0).value(0.0) == 0.0);
  CHECK(Phi::log_shift(1.0).value(0.0) == 0.0);
  CHECK(Phi::powerlaw(1.0, 1.0).derivative(0.0) == doctest::Approx(1.0));
  CHECK(Phi::powerlaw(1.0, 1.0).derivative(0.1) == doctest::Approx(1.0 / 1.21));
  CHECK(Phi::powerlaw(1.0, 1.0).value(0.0) == 0.0);
  CHECK(Phi::satexp().value(1.0) == doctest::Approx(1.0 - std::exp(-1.0)));
  CHECK(Phi::ratio(1.0).value(1.0) == doctest::Approx(0.5));
  CHECK(Phi::power(0.5).value(4.0) == doctest::Approx(2.0));
  CHECK(Phi::neg_power(2.0).value(3.0) == doctest::Approx(-9.0));
}

TEST_CASE("phi parameter ranges are enforced") {
  CHECK_THROWS_AS(Phi::neg_xlogx(-1.0), InvalidArgument);
  CHECK_THROWS_AS(Phi::log_shift(-0.1), InvalidArgument);
  CHECK_THROWS_AS(Phi::power(0.0), InvalidArgument);
  CHECK_THROWS_AS(Phi::power(1.5), InvalidArgument);
  CHECK_THROWS_AS(Phi::neg_power(0.5), InvalidArgument);
  CHECK_THROWS_AS(Phi::neg_power(2.5), InvalidArgument);
  CHECK_THROWS_AS(Phi::powerlaw(0.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(Phi::powerlaw(1.0, 0.0), InvalidArgument);
  CHECK_THROWS_AS(Phi::ratio(-1.0), InvalidArgument);
}

TEST_CASE("phi derivatives agree with finite differences") {
  for (const Phi& phi : all_phis()) {
    for (double x : {0.05, 0.3, 1.0, 2.7}) {
      const double h = 1e-5 * x;
      const double fd1 = (phi.value(x + h) - phi.value(x - h)) / (2 * h);
      const double fd2 = (phi.derivative(x + h) - phi.derivative(x - h)) / (2 * h);
      CAPTURE(phi.name());
      CAPTURE(x);
      CHECK(phi.derivative(x) == doctest::Approx(fd1).epsilon(1e-6));
      CHECK(phi.second_derivative(x) == doctest::Approx(fd2).epsilon(1e-5));
    }
  }
}

TEST_CASE("spectral value on hand spectra") {
  // Rows e1/sqrt(2), e2/sqrt(2): spectrum (0.5, 0.5).
  DesignMatrix d(2, 2);
  d << std::sqrt(0.5), 0, 0, std::sqrt(0.5);
  SpectralObjective entropy(shared(d), Phi::neg_xlogx(0.0));
  CHECK(entropy.value() == 0.0);
  entropy.commit(0);
  entropy.commit(1);
  CHECK(entropy.value() == doctest::Approx(std::log(2.0)));

  DesignMatrix e(2, 2);
  e << 1, 0, 0, std::sqrt(2.0);
  SpectralObjective logdet(shared(e), Phi::log_shift(1.0));
  logdet.commit(0);
  logdet.commit(1);
  CHECK(logdet.value() == doctest::Approx(std::log(2.0) + std::log(3.0)));
}

TEST_CASE("phi singular at zero is refused by the objective") {
  DesignMatrix d = DesignMatrix::Identity(2, 2);
  CHECK_THROWS_AS(SpectralObjective(shared(d), Phi::log_shift(0.0)), InvalidArgument);
}

TEST_CASE("gains equal value differences and the rank-one base case") {
  std::mt19937_64 rng(21);
  for (const Phi& phi : all_phis()) {
    const auto d = shared(density_normalize(testsupport::gaussian(14, 6, rng), Normalization::density_trace1));
    SpectralObjective obj(d, phi, Normalization::density_trace1);
    CHECK(obj.gain(3) == doctest::Approx(phi.value(d->row(3).squaredNorm()) - phi.value(0.0)));
    std::vector<Index> set;
    for (Index s : {0, 5, 9, 2, 11, 7, 1, 4}) {
      const double g = obj.gain(s);
      const double before = obj.value();
      obj.commit(s);
      set.push_back(s);
      CAPTURE(phi.name());
      CHECK(std::abs(obj.value() - before - g) <= 1e-9);
      CHECK(std::abs(obj.value() - dense_value(*d, set, phi)) <= 1e-9);
    }
  }
}

TEST_CASE("duplicate rows and removal gains match recomputation") {
  std::mt19937_64 rng(22);
  DesignMatrix raw = testsupport::gaussian(10, 5, rng);
  raw.row(7) = raw.row(2);
  const auto d = shared(density_normalize(raw, Normalization::density_trace1));
  SpectralObjective obj(d, Phi::neg_xlogx(0.0), Normalization::density_trace1);
  obj.commit(2);
  obj.commit(4);
  const double g = obj.gain(7);
  CHECK(std::abs(g - (dense_value(*d, {2, 4, 7}, obj.phi()) - dense_value(*d, {2, 4}, obj.phi()))) <= 1e-9);
  const double r = obj.removal_gain(2);
  CHECK(std::abs(r - (dense_value(*d, {4}, obj.phi()) - dense_value(*d, {2, 4}, obj.phi()))) <= 1e-9);
  obj.uncommit(2);
  CHECK(std::abs(obj.value() - dense_value(*d, {4}, obj.phi())) <= 1e-9);
  CHECK(!obj.contains(2));
}

TEST_CASE("oracle objective tracks the secular objective") {
  std::mt19937_64 rng(23);
  const auto d = shared(density_normalize(testsupport::gaussian(20, 8, rng), Normalization::density_trace1));
  SpectralObjective fast(d, Phi::neg_xlogx(0.0));
  OracleSpectralObjective slow(d, Phi::neg_xlogx(0.0));
  for (Index s : {3, 8, 12, 0}) {
    for (Index c = 0; c < 20; ++c) {
      if (fast.contains(c)) continue;
      CHECK(std::abs(fast.gain(c) - slow.gain(c)) <= 1e-10);
    }
    fast.commit(s);
    slow.commit(s);
    CHECK(std::abs(fast.value() - slow.value()) <= 1e-10);
  }
}

TEST_CASE("log-det objective equals the dense log determinant") {
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 20; ++trial) {
    const double t = trial % 2 == 0 ? 1e-3 : 0.7;
    const auto d = shared(testsupport::gaussian(9, 5, rng));
    SpectralObjective obj(d, Phi::log_shift(t));
    std::vector<Index> set;
    for (Index s = 0; s < 9; s += 1 + trial % 3) {
      obj.commit(s);
      set.push_back(s);
    }
    Matrix b = t * Matrix::Identity(5, 5);
    for (Index s : set) b += d->row(s).transpose() * d->row(s);
    const double logdet = std::log(b.determinant());
    CHECK(std::abs(obj.raw_value() - logdet) <= 1e-8);
    CHECK(std::abs(obj.value() - (logdet - 5 * std::log(t))) <= 1e-8);
  }
}

TEST_CASE("vendi scores") {
  Vector half(2);
  half << 0.5, 0.5;
  for (double q : {0.0, 0.5, 1.0, 2.0, 3.0}) CHECK(vendi_score(half, q) == doctest::Approx(2.0));
  Vector point(3);
  point << 1, 0, 0;
  CHECK(vendi_score(point, 0.0) == 1.0);
  CHECK(vendi_score(point, 1.0) == doctest::Approx(1.0));
  Vector skew(3);
  skew << 0.5, 0.25, 0.25;
  CHECK(vendi_score(skew, 2.0) == doctest::Approx(8.0 / 3.0));
  CHECK(vendi_score(skew * 4.0, 2.0, VendiScaling::unit_trace) == doctest::Approx(8.0 / 3.0));
  CHECK(vendi_score(skew, 1.0) == doctest::Approx(std::exp(1.5 * std::log(2.0))));
  CHECK_THROWS_AS(vendi_score(skew, -1.0), InvalidArgument);
}

TEST_CASE("density normalization") {
  std::mt19937_64 rng(25);
  const DesignMatrix d = testsupport::gaussian(30, 7, rng);
  const DesignMatrix t1 = density_normalize(d, Normalization::density_trace1);
  const Matrix b = t1.transpose() * t1;
  CHECK(b.trace() == doctest::Approx(1.0).epsilon(1e-12));
  const DesignMatrix em = density_normalize(d, Normalization::monotone_e_lambda_max);
  const Matrix be = em.transpose() * em;
  CHECK(spectral::dense_eigen_oracle(be).maxCoeff() == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));

  DesignMatrix one(1, 3);
  one << 3, 0, 4;
  const DesignMatrix n1 = density_normalize(one, Normalization::density_trace1);
  CHECK(n1.row(0).squaredNorm() == doctest::Approx(1.0));
  const DesignMatrix n2 = density_normalize(one, Normalization::monotone_e_lambda_max);
  CHECK(n2.row(0).squaredNorm() == doctest::Approx(std::exp(-1.0)));

  DesignMatrix zero_row = d;
  zero_row.row(4).setZero();
  CHECK_THROWS_WITH_AS(density_normalize(zero_row, Normalization::density_trace1),
                       doctest::Contains("row 4"), InvalidArgument);

  // log-Vendi of any subset is non-negative after normalization.
  const auto shared_t1 = std::make_shared<const DesignMatrix>(t1);
  SpectralObjective obj(shared_t1, Phi::neg_xlogx(0.0), Normalization::density_trace1);
  for (Index s = 0; s < 30; s += 3) {
    obj.commit(s);
    CHECK(obj.value() >= -1e-12);
  }
}

TEST_CASE("zeta bounds") {
  const ZetaReport a = zeta_bound(Phi::powerlaw(1.0, 1.0), 0.1);
  CHECK(a.zeta == doctest::Approx(0.826).epsilon(1e-3));
  CHECK(a.greedy_bound == doctest::Approx(0.5623).epsilon(1e-3));
  const ZetaReport b = zeta_bound(Phi::satexp(), 0.1);
  CHECK(b.zeta == doctest::Approx(std::exp(-0.1)));
  CHECK(b.greedy_bound == doctest::Approx(0.595).epsilon(1e-3));
  CHECK(zeta_bound(Phi::ratio(1.0), 0.0).zeta == 1.0);
  CHECK_THROWS_AS(zeta_bound(Phi::neg_xlogx(0.0), 0.1), UnsupportedPhi);
  CHECK_THROWS_AS(zeta_bound(Phi::power(0.5), 0.1), UnsupportedPhi);
}

TEST_CASE("Loewner matrices") {
  const auto g1 = [](double y) { return -1.0 / (y * y); };
  const auto dg1 = [](double y) { return 2.0 / (y * y * y); };
  Vector pts(3);
  pts << 1, 2, 3;
  const Matrix l = loewner_matrix(g1, dg1, pts);
  CHECK(l(0, 0) == doctest::Approx(2.0));
  CHECK(l(0, 1) == doctest::Approx(0.75));
  CHECK(l(0, 2) == doctest::Approx(4.0 / 9.0));
  CHECK(l(1, 1) == doctest::Approx(0.25));
  CHECK(l(1, 2) == doctest::Approx(5.0 / 36.0));
  CHECK(l(2, 2) == doctest::Approx(2.0 / 27.0));
  CHECK(min_eigenvalue(l) == doctest::Approx(-0.0475019).epsilon(1e-5));

  const Phi r = Phi::ratio(0.5);
  Vector two(2);
  two << 1, 9;
  const Matrix l3 = loewner_matrix([&](double x) { return -r.derivative(x); },
                                   [&](double x) { return -r.second_derivative(x); }, two);
  CHECK(l3(0, 0) == doctest::Approx(3.0 / 32.0));
  CHECK(l3(0, 1) == doctest::Approx(7.0 / 512.0));
  CHECK(l3(1, 1) == doctest::Approx(1.0 / 512.0));
  CHECK(l3.determinant() == doctest::Approx(-3.81e-6).epsilon(1e-2));

  const Matrix lin = loewner_matrix([](double x) { return 2 * x + 1; }, [](double) { return 2.0; }, pts);
  CHECK(min_eigenvalue(lin) >= -1e-12);
  Eigen::FullPivLU<Matrix> lu(lin);
  CHECK(lu.rank() == 1);

  Vector dup(2);
  dup << 1, 1;
  CHECK_THROWS_AS(loewner_matrix(g1, dg1, dup), InvalidArgument);
}

TEST_CASE("matrix antitone counterexample") {
  const AntitoneReport r = matrix_antitone_counterexample_check();
  CHECK(!r.psd);
  CHECK(r.difference_eigvals[0] == doctest::Approx(-2.0420e-3).epsilon(1e-3));
  CHECK(r.difference_eigvals[1] == doctest::Approx(1.0459e-5).epsilon(1e-3));
  CHECK(r.difference_eigvals[2] == doctest::Approx(5.0462e-2).epsilon(1e-4));
  CHECK(r.b_minus_a_eigvals[2] == doctest::Approx(0.3));
  CHECK(std::abs(r.b_minus_a_eigvals[0]) < 1e-15);
  CHECK(std::abs(r.b_minus_a_eigvals[1]) < 1e-15);
  const Matrix same = matrix_function(r.a, [](double x) { return -std::exp(-x); });
  CHECK((same - same).norm() == 0.0);
}
