#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "appraise/optimizer/constraint.hpp"
#include "appraise/set_objective.hpp"

namespace appraise::optimizer {

struct SelectionResult {
  std::vector<Index> order;
  std::vector<double> gains;
  double initial_value = 0.0;  // f of the empty set
  double final_value = 0.0;
  Index evaluations = 0;       // gain queries issued
  std::uint64_t seed = 0;
  std::string algorithm;
};

/// Gains of each candidate against the current set, written to out[i].
void sweep_gains_serial(const SetObjective& obj, std::span<const Index> candidates,
                        std::span<double> out);
/// Same result as the serial sweep, candidates split across OpenMP threads.
void sweep_gains_parallel(const SetObjective& obj, std::span<const Index> candidates,
                          std::span<double> out);

/// Gains within 1e-12 (1 + |g|) of each other are treated as equal.
bool near_tie(double a, double b);

struct GreedyOptions {
  bool lazy = true;
  bool parallel = true;
};

/// Greedy maximization until the constraint is saturated. Ties go to the lowest index.
SelectionResult greedy_max(SetObjective& obj, const Constraint& constraint, GreedyOptions opts = {});

/// Each step draws ceil((n/k) ln(1/epsilon)) unselected candidates and adds the best.
SelectionResult stochastic_greedy(SetObjective& obj, Index k, double epsilon, std::uint64_t seed,
                                  bool parallel = true);

/// Adds the feasible element of smallest gain each step, starting from `prefix`.
/// No approximation guarantee.
SelectionResult heuristic_greedy_min(SetObjective& obj, const Constraint& constraint,
                                     const std::vector<Index>& prefix = {}, bool parallel = true);

/// Uniform sample of `quota[c]` elements from each class c (labels in [0, quota.size())).
std::vector<Index> stratified_random(const std::vector<Index>& labels,
                                     const std::vector<Index>& quota, std::uint64_t seed);

/// k distinct elements of [0, n) uniformly at random, in draw order.
std::vector<Index> random_subset(Index n, Index k, std::uint64_t seed);

struct BruteForceResult {
  std::vector<Index> best_set;
  double value = 0.0;
};

inline constexpr Index kBruteForceLimit = 20;

/// Exhaustive maximum over all feasible sets (every size up to the constraint). n <= 20.
BruteForceResult brute_force_opt(SetObjective& obj, const Constraint& constraint);
BruteForceResult brute_force_opt(SetObjective& obj, Index k);

}  // namespace appraise::optimizer
