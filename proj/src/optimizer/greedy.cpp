#include "appraise/optimizer/greedy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <random>
#include <sstream>

#include "appraise/errors.hpp"

namespace appraise::optimizer {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double tie_tol(double g) { return 1e-12 * (1.0 + std::abs(g)); }

// g is at least as good as best up to the near-tie tolerance.
bool within_tie(double g, double best) {
  if (std::isinf(best)) return g == best || best < 0.0;
  return g >= best - tie_tol(best);
}

void sweep(const SetObjective& obj, std::span<const Index> cand, std::span<double> out, bool parallel) {
  if (parallel) {
    sweep_gains_parallel(obj, cand, out);
  } else {
    sweep_gains_serial(obj, cand, out);
  }
}

// Position in `cand` of the best gain: highest value (lowest if minimize),
// lowest element index among near ties.
std::size_t pick(std::span<const Index> cand, std::span<const double> gains, bool minimize) {
  double best = minimize ? std::numeric_limits<double>::infinity() : kNegInf;
  for (double g : gains) best = minimize ? std::min(best, g) : std::max(best, g);
  std::size_t at = cand.size();
  for (std::size_t i = 0; i < cand.size(); ++i) {
    const bool ok = minimize ? within_tie(-gains[i], -best) : within_tie(gains[i], best);
    if (ok && (at == cand.size() || cand[i] < cand[at])) at = i;
  }
  return at;
}

void start(SelectionResult& r, SetObjective& obj, const char* algorithm) {
  obj.reset();
  r.algorithm = algorithm;
  r.initial_value = obj.value();
}

void take(SelectionResult& r, SetObjective& obj, Index s, double gain) {
  obj.commit(s);
  r.order.push_back(s);
  r.gains.push_back(gain);
}

SelectionResult greedy_eager(SetObjective& obj, const Constraint& constraint, bool parallel,
                             bool minimize, const std::vector<Index>& prefix, const char* name) {
  SelectionResult r;
  start(r, obj, name);
  const Index n = obj.ground_size();
  Constraint::Tracker tracker(constraint);
  for (Index s : prefix) {
    if (s >= n || obj.contains(s) || !tracker.can_add(s)) {
      std::ostringstream msg;
      msg << "prefix element " << s << " is out of range, repeated, or violates the constraint";
      throw InvalidArgument(msg.str());
    }
    const double g = obj.gain(s);
    ++r.evaluations;
    take(r, obj, s, g);
    tracker.add(s);
  }
  std::vector<Index> cand;
  std::vector<double> gains;
  while (!tracker.full()) {
    cand.clear();
    for (Index s = 0; s < n; ++s) {
      if (!obj.contains(s) && tracker.can_add(s)) cand.push_back(s);
    }
    if (cand.empty()) break;
    gains.resize(cand.size());
    sweep(obj, cand, gains, parallel);
    r.evaluations += cand.size();
    const std::size_t at = pick(cand, gains, minimize);
    take(r, obj, cand[at], gains[at]);
    tracker.add(cand[at]);
  }
  r.final_value = obj.value();
  return r;
}

struct Bound {
  double gain;
  Index element;
  Index stamp;  // |S| when the gain was computed
};

struct BoundOrder {
  bool operator()(const Bound& a, const Bound& b) const {
    if (a.gain != b.gain) return a.gain < b.gain;
    return a.element > b.element;
  }
};

SelectionResult greedy_lazy(SetObjective& obj, const Constraint& constraint, bool parallel) {
  SelectionResult r;
  start(r, obj, "lazy_greedy");
  const Index n = obj.ground_size();
  Constraint::Tracker tracker(constraint);

  std::vector<Index> all(n);
  for (Index s = 0; s < n; ++s) all[s] = s;
  std::vector<double> g0(n);
  sweep(obj, all, g0, parallel);
  r.evaluations += n;

  std::priority_queue<Bound, std::vector<Bound>, BoundOrder> heap;
  for (Index s = 0; s < n; ++s) heap.push({g0[s], s, 0});

  std::vector<Bound> fresh;
  std::vector<Index> fresh_idx;
  std::vector<double> fresh_gain;
  while (!tracker.full() && !heap.empty()) {
    const Index size = tracker.size();
    double best = kNegInf;
    fresh.clear();
    // Pop until every remaining bound is below the best fresh gain by more
    // than the tie tolerance; the popped fresh entries then hold every
    // element that could win the step.
    while (!heap.empty()) {
      const Bound top = heap.top();
      if (!fresh.empty() && !within_tie(top.gain, best)) break;
      heap.pop();
      if (!tracker.can_add(top.element)) continue;  // blocks only fill up
      if (top.stamp != size) {
        heap.push({obj.gain(top.element), top.element, size});
        ++r.evaluations;
        continue;
      }
      fresh.push_back(top);
      best = std::max(best, top.gain);
    }
    if (fresh.empty()) break;
    fresh_idx.clear();
    fresh_gain.clear();
    for (const Bound& b : fresh) {
      fresh_idx.push_back(b.element);
      fresh_gain.push_back(b.gain);
    }
    const std::size_t at = pick(fresh_idx, fresh_gain, false);
    for (std::size_t i = 0; i < fresh.size(); ++i) {
      if (i != at) heap.push(fresh[i]);
    }
    take(r, obj, fresh[at].element, fresh[at].gain);
    tracker.add(fresh[at].element);
  }
  r.final_value = obj.value();
  return r;
}

}  // namespace

bool near_tie(double a, double b) { return within_tie(a, b) && within_tie(b, a); }

void sweep_gains_serial(const SetObjective& obj, std::span<const Index> candidates,
                        std::span<double> out) {
  for (std::size_t i = 0; i < candidates.size(); ++i) out[i] = obj.gain(candidates[i]);
}

void sweep_gains_parallel(const SetObjective& obj, std::span<const Index> candidates,
                          std::span<double> out) {
  const auto count = static_cast<std::ptrdiff_t>(candidates.size());
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = obj.gain(candidates[static_cast<std::size_t>(i)]);
    } catch (...) {
#pragma omp critical(appraise_sweep_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

SelectionResult greedy_max(SetObjective& obj, const Constraint& constraint, GreedyOptions opts) {
  constraint.validate(obj.ground_size());
  if (opts.lazy) return greedy_lazy(obj, constraint, opts.parallel);
  return greedy_eager(obj, constraint, opts.parallel, false, {}, "greedy");
}

SelectionResult heuristic_greedy_min(SetObjective& obj, const Constraint& constraint,
                                     const std::vector<Index>& prefix, bool parallel) {
  constraint.validate(obj.ground_size());
  return greedy_eager(obj, constraint, parallel, true, prefix, "greedy_min");
}

SelectionResult stochastic_greedy(SetObjective& obj, Index k, double epsilon, std::uint64_t seed,
                                  bool parallel) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw InvalidArgument("stochastic_greedy: epsilon must lie in (0, 1)");
  }
  const Index n = obj.ground_size();
  Constraint::cardinality(k).validate(n);
  const double want = std::ceil(static_cast<double>(n) / static_cast<double>(k) * std::log(1.0 / epsilon));
  const Index sample_size = std::max<Index>(1, static_cast<Index>(std::min(want, static_cast<double>(n))));

  SelectionResult r;
  start(r, obj, "stochastic_greedy");
  r.seed = seed;
  std::mt19937_64 rng(seed);
  std::vector<Index> remaining(n);
  for (Index s = 0; s < n; ++s) remaining[s] = s;
  std::vector<Index> cand;
  std::vector<double> gains;
  for (Index step = 0; step < k; ++step) {
    const Index take_n = std::min(sample_size, remaining.size());
    // Partial Fisher-Yates: the first take_n slots become a uniform sample.
    for (Index i = 0; i < take_n; ++i) {
      std::uniform_int_distribution<Index> pick_at(i, remaining.size() - 1);
      std::swap(remaining[i], remaining[pick_at(rng)]);
    }
    cand.assign(remaining.begin(), remaining.begin() + static_cast<std::ptrdiff_t>(take_n));
    gains.resize(take_n);
    sweep(obj, cand, gains, parallel);
    r.evaluations += take_n;
    const std::size_t at = pick(cand, gains, false);
    take(r, obj, cand[at], gains[at]);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(at));
  }
  r.final_value = obj.value();
  return r;
}

std::vector<Index> stratified_random(const std::vector<Index>& labels,
                                     const std::vector<Index>& quota, std::uint64_t seed) {
  std::vector<std::vector<Index>> members(quota.size());
  for (Index i = 0; i < labels.size(); ++i) {
    if (labels[i] >= quota.size()) {
      std::ostringstream msg;
      msg << "stratified_random: element " << i << " has class " << labels[i] << " without a quota";
      throw InvalidArgument(msg.str());
    }
    members[labels[i]].push_back(i);
  }
  for (Index c = 0; c < quota.size(); ++c) {
    if (quota[c] > members[c].size()) {
      std::ostringstream msg;
      msg << "stratified_random: class " << c << " has " << members[c].size()
          << " elements, fewer than its quota " << quota[c];
      throw InvalidArgument(msg.str());
    }
  }
  std::mt19937_64 rng(seed);
  std::vector<Index> out;
  for (Index c = 0; c < quota.size(); ++c) {
    auto& m = members[c];
    for (Index i = 0; i < quota[c]; ++i) {
      std::uniform_int_distribution<Index> pick_at(i, m.size() - 1);
      std::swap(m[i], m[pick_at(rng)]);
      out.push_back(m[i]);
    }
  }
  return out;
}

std::vector<Index> random_subset(Index n, Index k, std::uint64_t seed) {
  if (k > n) throw InvalidArgument("random_subset: k exceeds ground set size");
  return stratified_random(std::vector<Index>(n, 0), {k}, seed);
}

BruteForceResult brute_force_opt(SetObjective& obj, const Constraint& constraint) {
  const Index n = obj.ground_size();
  if (n > kBruteForceLimit) {
    std::ostringstream msg;
    msg << "brute_force_opt: ground set of size " << n << " exceeds the limit of " << kBruteForceLimit;
    throw InvalidArgument(msg.str());
  }
  constraint.validate(n);
  BruteForceResult best;
  best.value = kNegInf;
  std::vector<Index> set;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    set.clear();
    Constraint::Tracker tracker(constraint);
    bool ok = true;
    for (Index s = 0; s < n && ok; ++s) {
      if (!(mask >> s & 1u)) continue;
      ok = tracker.can_add(s);
      tracker.add(s);
      set.push_back(s);
    }
    if (!ok) continue;
    const double v = obj.evaluate(set);
    if (v > best.value) {
      best.value = v;
      best.best_set = set;
    }
  }
  obj.reset();
  return best;
}

BruteForceResult brute_force_opt(SetObjective& obj, Index k) {
  return brute_force_opt(obj, Constraint::cardinality(k));
}

}  // namespace appraise::optimizer
