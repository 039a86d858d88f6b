#pragma once

#include <cstdint>
#include <vector>

#include "appraise/types.hpp"

namespace appraise::app {

struct BenchCell {
  Index n = 0;
  Index m = 0;
  double k_frac = 0.0;
  Index k = 0;
  double oracle_seconds = 0.0;   // minimum over repeats
  double secular_seconds = 0.0;  // minimum over repeats
  double speedup = 0.0;
  bool identical = false;
  std::vector<Index> oracle_order;
  std::vector<Index> secular_order;
};

struct BenchConfig {
  std::vector<Index> n_values = {500};
  Index m = 512;
  std::vector<double> k_fracs = {0.05};
  Index repeats = 1;
  std::uint64_t seed = 0;
  /// Refuse cells whose oracle work estimate n * m^3 exceeds this.
  double max_work = 1e12;
  bool parallel = true;
};

/// Standard Gaussian n x m design, trace-normalized. Deterministic in the seed.
DesignMatrix bench_design(Index n, Index m, std::uint64_t seed);

/// Lazy greedy on the log-Vendi objective with dense-eigensolve gains and with
/// secular gains, timed separately on the same design.
BenchCell run_bench_cell(Index n, Index m, double k_frac, Index repeats, std::uint64_t seed,
                         bool parallel = true);

/// Throws InvalidArgument for cells over the work ceiling before running anything.
std::vector<BenchCell> run_bench(const BenchConfig& config);

}  // namespace appraise::app
