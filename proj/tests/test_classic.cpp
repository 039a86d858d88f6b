#include <cmath>
#include <limits>
#include <sstream>

#include "appraise/classic/facility_location.hpp"
#include "appraise/classic/modular.hpp"
#include "appraise/classic/scaling_law.hpp"
#include "appraise/classic/similarity.hpp"
#include "appraise/errors.hpp"
#include "appraise/optimizer/greedy.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace appraise;
using namespace appraise::classic;

namespace {

// f(A) = sum_j max_{i in A} s_ij straight from the column lists.
double brute_fl(const SparseSimilarity& sim, const std::vector<Index>& set) {
  double total = 0.0;
  for (Index j = 0; j < sim.size(); ++j) {
    double best = 0.0;
    for (const SimEntry& e : sim.column(j)) {
      if (std::find(set.begin(), set.end(), e.index) != set.end()) best = std::max(best, e.value);
    }
    total += best;
  }
  return total;
}

}  // namespace

TEST_CASE("rbf similarities on a line") {
  DesignMatrix d(3, 1);
  d << 0, 1, 2;
  const SparseSimilarity sim = build_similarity(d, Kernel::rbf(1.0), 3);
  for (Index j = 0; j < 3; ++j) {
    CHECK(sim.column(j).front().index == j);
    CHECK(sim.column(j).front().value == 1.0);
  }
  const auto& c0 = sim.column(0);
  CHECK(c0[1].index == 1);
  CHECK(c0[1].value == doctest::Approx(std::exp(-1.0)));
  CHECK(c0[2].index == 2);
  CHECK(c0[2].value == doctest::Approx(std::exp(-4.0)));
}

TEST_CASE("top_k keeps the largest entries, ties by lower index") {
  DesignMatrix d(4, 1);
  d << 0, 1, -1, 5;
  const SparseSimilarity one = build_similarity(d, Kernel::rbf(1.0), 1);
  for (Index j = 0; j < 4; ++j) CHECK(one.column(j) .size() == 1);
  const SparseSimilarity two = build_similarity(d, Kernel::rbf(1.0), 2);
  // Column 0: points 1 and -1 tie; index 1 wins.
  CHECK(two.column(0)[1].index == 1);
}

TEST_CASE("dot and cosine kernels clamp negatives and reject zero rows") {
  DesignMatrix d(3, 2);
  d << 1, 0, -1, 0, 0, 2;
  const SparseSimilarity dot = build_similarity(d, Kernel::dot(), 3);
  for (Index j = 0; j < 3; ++j) {
    for (const SimEntry& e : dot.column(j)) CHECK(e.value >= 0.0);
  }
  const SparseSimilarity cos = build_similarity(d, Kernel::cosine(), 3);
  CHECK(cos.column(2).front().value == doctest::Approx(1.0));
  DesignMatrix z = d;
  z.row(1).setZero();
  CHECK_THROWS_AS(build_similarity(z, Kernel::cosine(), 2), InvalidArgument);
  CHECK_THROWS_AS(build_similarity(d, Kernel::rbf(0.0), 2), InvalidArgument);
  CHECK_THROWS_AS(build_similarity(d, Kernel::rbf(1.0), 0), InvalidArgument);
}

TEST_CASE("SIM1 round trip and corruption") {
  std::mt19937_64 rng(31);
  const SparseSimilarity sim = build_similarity(testsupport::gaussian(25, 4, rng), Kernel::rbf(2.0), 6);
  std::stringstream buf;
  write_sim1(buf, sim);
  const std::string bytes = buf.str();
  CHECK(bytes.substr(0, 4) == "SIM1");
  CHECK(bytes.size() == 4 + 8 + 4 * 25 + 12 * sim.nonzeros());
  std::stringstream in(bytes);
  CHECK(read_sim1(in) == sim);
  std::stringstream truncated(bytes.substr(0, bytes.size() - 3));
  CHECK_THROWS_AS(read_sim1(truncated), DataFormatError);
  std::stringstream bad("SIMX");
  CHECK_THROWS_AS(read_sim1(bad), DataFormatError);
}

TEST_CASE("facility location gains") {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 40; ++trial) {
    const auto sim = std::make_shared<const SparseSimilarity>(
        build_similarity(testsupport::gaussian(8, 3, rng), Kernel::rbf(1.5), trial % 2 ? 8 : 3));
    FacilityLocation fl(sim);
    double first = 0.0;
    for (const SimEntry& e : sim->row(4)) first += e.value;
    CHECK(fl.gain(4) == doctest::Approx(first));
    std::vector<Index> set;
    for (Index s : {4, 1, 6, 0}) {
      for (Index c = 0; c < 8; ++c) {
        if (fl.contains(c)) {
          CHECK(fl.gain(c) == 0.0);  // nothing left to improve
          continue;
        }
        auto with = set;
        with.push_back(c);
        CHECK(std::abs(fl.gain(c) - (brute_fl(*sim, with) - brute_fl(*sim, set))) <= 1e-12);
      }
      fl.commit(s);
      set.push_back(s);
      CHECK(std::abs(fl.value() - brute_fl(*sim, set)) <= 1e-12);
    }
  }
  const auto sim = std::make_shared<const SparseSimilarity>(
      build_similarity(DesignMatrix::Identity(2, 2), Kernel::rbf(1.0), 2));
  FacilityLocation fl(sim);
  CHECK_THROWS_AS(fl.gain(5), InvalidArgument);
}

TEST_CASE("facility location diminishing returns on every chain for n <= 8") {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 5; ++trial) {
    const Index n = 7;
    const auto sim = std::make_shared<const SparseSimilarity>(
        build_similarity(testsupport::gaussian(n, 2, rng), Kernel::rbf(1.0), n));
    for (std::uint32_t t = 0; t < (1u << n); ++t) {
      for (std::uint32_t s = t;; s = (s - 1) & t) {  // every subset S of T
        std::vector<Index> sv, tv;
        for (Index i = 0; i < n; ++i) {
          if (s >> i & 1u) sv.push_back(i);
          if (t >> i & 1u) tv.push_back(i);
        }
        for (Index x = 0; x < n; ++x) {
          if (t >> x & 1u) continue;
          auto sx = sv, tx = tv;
          sx.push_back(x);
          tx.push_back(x);
          const double gs = brute_fl(*sim, sx) - brute_fl(*sim, sv);
          const double gt = brute_fl(*sim, tx) - brute_fl(*sim, tv);
          CHECK(gs >= gt - 1e-12);
          CHECK(gt >= -1e-12);
        }
        if (s == 0) break;
      }
    }
  }
}

TEST_CASE("chinchilla and cluster laws") {
  ChinchillaLaw c{1.0, 1.0, 1.0, 0.0};
  CHECK(c.value(2.0) == doctest::Approx(0.5));
  CHECK(c.value(0.0) == -std::numeric_limits<double>::infinity());
  c.empty_floor = 0.5;
  CHECK(c.value(0.0) == doctest::Approx(-1.0));
  ChinchillaLaw d{2.0, 3.0, 0.7, 0.0};
  for (double k = 1; k <= 10000; k += 1) {
    CHECK(d.value(k + 2) - d.value(k + 1) <= d.value(k + 1) - d.value(k) + 1e-15);
  }
  ClusterLaw cl{1.0, {1.0, 2.0}, {0.5, 1.5}};
  CHECK(cl.value({0.0, 0.0}) == doctest::Approx(1.0 - 1.0 - std::pow(2.0, -1.5)));
  ScalingLawObjective obj({0, 1, 1, 0, 1}, cl);
  obj.commit(1);
  obj.commit(2);
  CHECK(obj.value() == doctest::Approx(cl.value({0.0, 2.0})));
  CHECK(obj.gain(0) == doctest::Approx(cl.value({1.0, 2.0}) - cl.value({0.0, 2.0})));
  ScalingLawObjective chin(4, ChinchillaLaw{1.0, 1.0, 1.0, 0.0});
  CHECK(chin.gain(0) == std::numeric_limits<double>::infinity());
  chin.commit(0);
  CHECK(chin.gain(1) == doctest::Approx(0.5));

  // Infinite first gains tie; the lowest index is taken and the run continues.
  ScalingLawObjective fresh(4, ChinchillaLaw{1.0, 1.0, 1.0, 0.0});
  const auto r = optimizer::greedy_max(fresh, optimizer::Constraint::cardinality(3));
  CHECK(r.order == std::vector<Index>{0, 1, 2});
  CHECK(r.final_value == doctest::Approx(1.0 - 1.0 / 3.0));
}

TEST_CASE("epoch law") {
  EpochLaw law{1.0, 2.0, 0.6, 1000.0, 3.0};
  CHECK(law.loss(1000.0) == doctest::Approx(2.0 * std::pow(1000.0, -0.6)));
  CHECK(law.loss(5000.0) == doctest::Approx(2.0 * std::pow(1000.0, -0.6)));
  CHECK(law.loss(0.0) == std::numeric_limits<double>::infinity());
  // Direct formula at kbar = 3 (d in (C/4, C/3]).
  const double d = 300.0;
  const double b4 = 0.6 * std::pow(0.5, 3.0 / 3.0);
  const double expect = 2.0 * std::pow(d, -0.6 + b4) * std::pow(2.0, -0.6 * std::pow(0.5, 1.0 / 3.0)) *
                        std::pow(1.5, -0.6 * std::pow(0.5, 2.0 / 3.0)) * std::pow(1000.0 / 3.0, -b4);
  CHECK(law.loss(d) == doctest::Approx(expect).epsilon(1e-12));
  EpochLaw bad = law;
  bad.budget = 0.0;
  CHECK_THROWS_AS(bad.loss(1.0), InvalidArgument);
  ScalingLawObjective obj(10, law);
  CHECK(obj.value() == -std::numeric_limits<double>::infinity());
}

TEST_CASE("modular objective") {
  ModularObjective m({1.0, -2.0, 3.5});
  m.commit(2);
  m.commit(1);
  CHECK(m.value() == doctest::Approx(1.5));
  CHECK(m.selected() == std::vector<Index>{2, 1});
}
