#include "appraise/app/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <random>
#include <sstream>

#include "appraise/errors.hpp"
#include "appraise/objectives/spectral_objective.hpp"
#include "appraise/objectives/vendi.hpp"
#include "appraise/optimizer/greedy.hpp"

namespace appraise::app {

DesignMatrix bench_design(Index n, Index m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  DesignMatrix d(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    for (Eigen::Index j = 0; j < d.cols(); ++j) d(i, j) = g(rng);
  }
  return objectives::density_normalize(d, objectives::Normalization::density_trace1);
}

namespace {

template <class Obj>
double timed_greedy(Obj& obj, Index k, bool parallel, std::vector<Index>& order) {
  const auto t0 = std::chrono::steady_clock::now();
  const optimizer::SelectionResult r =
      optimizer::greedy_max(obj, optimizer::Constraint::cardinality(k), {true, parallel});
  const auto t1 = std::chrono::steady_clock::now();
  order = r.order;
  return std::chrono::duration<double>(t1 - t0).count();
}

}  // namespace

BenchCell run_bench_cell(Index n, Index m, double k_frac, Index repeats, std::uint64_t seed,
                         bool parallel) {
  if (n == 0 || m == 0) throw InvalidArgument("bench: n and m must be positive");
  if (!(k_frac > 0.0 && k_frac <= 1.0)) throw InvalidArgument("bench: k fraction must lie in (0, 1]");
  if (repeats == 0) throw InvalidArgument("bench: repeats must be >= 1");
  BenchCell cell;
  cell.n = n;
  cell.m = m;
  cell.k_frac = k_frac;
  cell.k = std::max<Index>(1, static_cast<Index>(std::llround(k_frac * static_cast<double>(n))));
  const auto design = std::make_shared<const DesignMatrix>(bench_design(n, m, seed));
  const objectives::Phi phi = objectives::Phi::neg_xlogx(0.0);

  cell.oracle_seconds = INFINITY;
  cell.secular_seconds = INFINITY;
  cell.identical = true;
  for (Index rep = 0; rep < repeats; ++rep) {
    objectives::OracleSpectralObjective oracle(design, phi);
    std::vector<Index> o;
    cell.oracle_seconds = std::min(cell.oracle_seconds, timed_greedy(oracle, cell.k, parallel, o));
    objectives::SpectralObjective secular(design, phi, objectives::Normalization::density_trace1);
    std::vector<Index> s;
    cell.secular_seconds = std::min(cell.secular_seconds, timed_greedy(secular, cell.k, parallel, s));
    if (rep == 0) {
      cell.oracle_order = o;
      cell.secular_order = s;
    }
    cell.identical = cell.identical && o == s && o == cell.oracle_order && s == cell.secular_order;
  }
  cell.speedup = cell.oracle_seconds / cell.secular_seconds;
  return cell;
}

std::vector<BenchCell> run_bench(const BenchConfig& config) {
  for (Index n : config.n_values) {
    const double work = static_cast<double>(n) * std::pow(static_cast<double>(config.m), 3.0);
    if (work > config.max_work) {
      std::ostringstream msg;
      msg << "bench: cell n=" << n << ", m=" << config.m << " has oracle work estimate " << work
          << " above the ceiling " << config.max_work;
      throw InvalidArgument(msg.str());
    }
  }
  std::vector<BenchCell> cells;
  for (Index n : config.n_values) {
    for (double f : config.k_fracs) {
      cells.push_back(run_bench_cell(n, config.m, f, config.repeats, config.seed, config.parallel));
    }
  }
  return cells;
}

}  // namespace appraise::app
