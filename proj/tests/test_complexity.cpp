#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "appraise/spectral/spectral_state.hpp"
#include "support.hpp"

using namespace appraise;

namespace {

// Median wall time of one query against a rank-r state in dimension m.
double median_query_seconds(Index m, Index r, int samples) {
  std::mt19937_64 rng(17 + r);
  Vector lambda(static_cast<Eigen::Index>(r));
  for (Eigen::Index i = 0; i < lambda.size(); ++i) lambda[i] = 1.0 + static_cast<double>(i);
  const auto state =
      spectral::SpectralState::from_factorization(testsupport::random_orthonormal(m, r, rng), lambda);
  const Vector u = testsupport::gaussian_vector(m, rng);
  spectral::QueryWorkspace ws;
  const int inner = std::max(1, static_cast<int>(200000 / (r * r)));
  std::vector<double> times;
  double sink = 0.0;
  for (int s = 0; s < samples; ++s) {
    const auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < inner; ++i) sink += static_cast<double>(state.query(u, Update::add, ws).new_rank);
    times.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / inner);
  }
  REQUIRE(std::isfinite(sink));
  std::nth_element(times.begin(), times.begin() + samples / 2, times.end());
  return times[samples / 2];
}

}  // namespace

TEST_CASE("query time grows about quadratically in the rank") {
  const Index m = 512;
  const std::vector<Index> ranks = {64, 128, 256, 512};
  std::vector<double> x, y;
  for (Index r : ranks) {
    x.push_back(std::log(static_cast<double>(r)));
    y.push_back(std::log(median_query_seconds(m, r, 31)));
  }
  const double xm = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
  const double ym = std::accumulate(y.begin(), y.end(), 0.0) / y.size();
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - xm) * (y[i] - ym);
    sxx += (x[i] - xm) * (x[i] - xm);
  }
  const double slope = sxy / sxx;
  MESSAGE("log-log slope " << slope);
  CHECK(slope >= 1.7);
  CHECK(slope <= 2.3);
}
