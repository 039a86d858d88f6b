#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>

#include "CLI11.hpp"
#include "appraise/app/bench.hpp"
#include "appraise/app/verify.hpp"
#include "appraise/classic/facility_location.hpp"
#include "appraise/classic/similarity.hpp"
#include "appraise/errors.hpp"
#include "appraise/io/design_io.hpp"
#include "appraise/objectives/spectral_objective.hpp"
#include "appraise/objectives/vendi.hpp"
#include "appraise/optimizer/greedy.hpp"
#include "json.hpp"

using namespace appraise;
using nlohmann::json;

namespace {

enum Exit { ok = 0, verify_failed = 1, invalid = 2, data_format = 3, numerical = 4, mismatch = 5 };

// Thrown errors carry the stage in which they happened.
struct Staged {
  std::string stage;
};

struct ObjectiveArgs {
  std::string objective = "vendi";
  std::string normalize = "auto";
  std::optional<double> t;  // unset: per-objective default
  double eta = 0.5;
  double alpha = 1.0;
  double beta = 1.0;
  std::string kernel = "rbf";
  double sigma = 1.0;
  Index top_k = classic::kDefaultTopK;
  std::string sim_path;
  std::string write_sim;
};

void add_objective_options(CLI::App* cmd, ObjectiveArgs& a) {
  cmd->add_option("--objective", a.objective, "Set function")
      ->check(CLI::IsMember({"vendi", "dpp", "power", "plaw", "satexp", "ratio", "fl"}));
  cmd->add_option("--normalize", a.normalize, "Design normalization (auto: trace1 for vendi, none otherwise)")
      ->check(CLI::IsMember({"auto", "none", "trace1", "emax"}));
  cmd->add_option("--t", a.t, "Shift t for vendi (default 0) and dpp (default 1e-3)");
  cmd->add_option("--eta", a.eta, "Exponent for power, 0 < eta <= 1");
  cmd->add_option("--alpha", a.alpha, "alpha for plaw and ratio");
  cmd->add_option("--beta", a.beta, "beta for plaw");
  cmd->add_option("--kernel", a.kernel, "Similarity kernel for fl")->check(CLI::IsMember({"rbf", "dot", "cosine"}));
  cmd->add_option("--sigma", a.sigma, "rbf bandwidth: exp(-|x-y|^2 / sigma)");
  cmd->add_option("--top-k", a.top_k, "Similarities kept per element for fl");
  cmd->add_option("--sim", a.sim_path, "Load fl similarities from a SIM1 file instead of computing them");
  cmd->add_option("--write-sim", a.write_sim, "Save the fl similarities as SIM1");
}

objectives::Normalization normalization_of(const ObjectiveArgs& a) {
  std::string n = a.normalize;
  if (n == "auto") n = a.objective == "vendi" ? "trace1" : "none";
  if (n == "trace1") return objectives::Normalization::density_trace1;
  if (n == "emax") return objectives::Normalization::monotone_e_lambda_max;
  return objectives::Normalization::none;
}

objectives::Phi phi_of(const ObjectiveArgs& a) {
  using objectives::Phi;
  if (a.objective == "vendi") return Phi::neg_xlogx(a.t.value_or(0.0));
  if (a.objective == "dpp") return Phi::log_shift(a.t.value_or(1e-3));
  if (a.objective == "power") return Phi::power(a.eta);
  if (a.objective == "plaw") return Phi::powerlaw(a.alpha, a.beta);
  if (a.objective == "satexp") return Phi::satexp();
  if (a.objective == "ratio") return Phi::ratio(a.alpha);
  throw InvalidArgument("unknown spectral objective " + a.objective);
}

struct Built {
  std::shared_ptr<SetObjective> objective;
  json description;
};

Built build_objective(const ObjectiveArgs& a, const DesignMatrix& raw) {
  Built b;
  const auto norm = normalization_of(a);
  b.description["name"] = a.objective;
  b.description["normalize"] = objectives::to_string(norm);
  if (a.objective == "fl") {
    std::shared_ptr<const classic::SparseSimilarity> sim;
    if (!a.sim_path.empty()) {
      sim = std::make_shared<const classic::SparseSimilarity>(classic::read_sim1(a.sim_path));
      if (sim->size() != static_cast<Index>(raw.rows())) {
        throw DataFormatError("similarity file size does not match the data");
      }
    } else {
      const DesignMatrix d = objectives::density_normalize(raw, norm);
      classic::Kernel k = a.kernel == "dot" ? classic::Kernel::dot()
                          : a.kernel == "cosine" ? classic::Kernel::cosine()
                                                 : classic::Kernel::rbf(a.sigma);
      sim = std::make_shared<const classic::SparseSimilarity>(classic::build_similarity(d, k, a.top_k));
    }
    if (!a.write_sim.empty()) classic::write_sim1(a.write_sim, *sim);
    b.description["kernel"] = a.kernel;
    b.description["sigma"] = a.sigma;
    b.description["top_k"] = sim->top_k();
    b.objective = std::make_shared<classic::FacilityLocation>(sim);
    return b;
  }
  const objectives::Phi phi = phi_of(a);
  b.description["phi"] = phi.name();
  auto d = std::make_shared<const DesignMatrix>(objectives::density_normalize(raw, norm));
  b.objective = std::make_shared<objectives::SpectralObjective>(d, phi, norm);
  return b;
}

void write_json(const json& doc, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << doc.dump(2) << "\n";
    return;
  }
  std::ofstream f(out);
  if (!f) throw DataFormatError("cannot open " + out + " for writing");
  f << doc.dump(2) << "\n";
}

// Per-class quota vector from labels and a uniform quota.
std::vector<Index> uniform_quotas(const std::vector<Index>& labels, Index q) {
  const Index classes = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
  return std::vector<Index>(classes, q);
}

int run_guarded(const std::function<int(std::string&)>& body) {
  std::string stage = "startup";
  try {
    return body(stage);
  } catch (const DataFormatError& e) {
    std::cerr << "error (" << stage << "): data format: " << e.what() << "\n";
    return data_format;
  } catch (const InvalidArgument& e) {
    std::cerr << "error (" << stage << "): invalid argument: " << e.what() << "\n";
    return invalid;
  } catch (const NumericalFailure& e) {
    std::cerr << "error (" << stage << "): numerical failure: " << e.what() << "\n";
    return numerical;
  } catch (const Error& e) {
    std::cerr << "error (" << stage << "): " << e.what() << "\n";
    return numerical;
  }
}

void apply_thread_cap() {
  if (const char* env = std::getenv("SPECTRAL_APPRAISE_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || n < 1) {
      throw InvalidArgument(std::string("SPECTRAL_APPRAISE_THREADS must be a positive integer, got '") + env + "'");
    }
    omp_set_num_threads(static_cast<int>(n));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Subset appraisal and selection with matrix spectral objectives"};
  app.require_subcommand(1);

  // select
  auto* sel = app.add_subcommand("select", "Choose a subset");
  ObjectiveArgs sel_obj;
  std::string sel_data, sel_labels, sel_prefix, sel_out, mode = "max";
  Index k = 0, quota = 0;
  double epsilon = 0.1;
  std::uint64_t seed = 0;
  bool eager = false;
  sel->add_option("--data", sel_data, "DMX1 or CSV design matrix")->required();
  add_objective_options(sel, sel_obj);
  sel->add_option("--mode", mode, "Selection strategy")
      ->check(CLI::IsMember({"max", "min", "stochastic", "random", "stratified"}));
  auto* k_opt = sel->add_option("--k", k, "Subset size");
  auto* q_opt = sel->add_option("--quotas-per-class", quota, "Per-class quota (requires --labels)");
  k_opt->excludes(q_opt);
  sel->add_option("--labels", sel_labels, "Newline-delimited class ids, one per sample");
  sel->add_option("--epsilon", epsilon, "Stochastic greedy accuracy parameter in (0,1)");
  sel->add_option("--prefix", sel_prefix, "File of indices that seed min mode");
  sel->add_option("--seed", seed, "Random seed");
  sel->add_flag("--eager", eager, "Disable lazy evaluation in max mode");
  sel->add_option("--out", sel_out, "Output JSON path (stdout if omitted)");

  // score
  auto* score = app.add_subcommand("score", "Evaluate a given subset");
  ObjectiveArgs sc_obj;
  std::string sc_data, sc_subset, sc_out;
  double vendi_q = 1.0;
  score->add_option("--data", sc_data, "DMX1 or CSV design matrix")->required();
  score->add_option("--subset", sc_subset, "File of indices")->required();
  add_objective_options(score, sc_obj);
  score->add_option("--q", vendi_q, "Vendi order reported for spectral objectives");
  score->add_option("--out", sc_out, "Output JSON path (stdout if omitted)");

  // bench
  auto* bench = app.add_subcommand("bench", "Dense eigensolver vs secular greedy timing");
  app::BenchConfig bc;
  std::string bench_objective = "vendi", bench_out;
  bench->add_option("--n", bc.n_values, "Ground set sizes")->expected(1, -1);
  bench->add_option("--m", bc.m, "Embedding dimension");
  bench->add_option("--k-frac", bc.k_fracs, "k / n fractions")->expected(1, -1);
  bench->add_option("--repeats", bc.repeats, "Timing repeats (minimum is reported)");
  bench->add_option("--objective", bench_objective, "Objective")->check(CLI::IsMember({"vendi"}));
  bench->add_option("--seed", bc.seed, "Random seed for the design matrix");
  bench->add_option("--max-work", bc.max_work, "Refuse cells with n*m^3 above this");
  bench->add_option("--out", bench_out, "Also write the report as JSON");

  // verify
  auto* verify = app.add_subcommand("verify", "Run the built-in numerical battery");
  std::uint64_t verify_seed = 0;
  verify->add_option("--seed", verify_seed, "Seed for the randomized items");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return invalid;
  }

  return run_guarded([&](std::string& stage) -> int {
    apply_thread_cap();

    if (*sel) {
      stage = "load";
      const DesignMatrix raw = io::read_design(sel_data);
      const Index n = static_cast<Index>(raw.rows());
      std::vector<Index> labels;
      if (!sel_labels.empty()) labels = io::read_labels(sel_labels, n);
      if (*q_opt && labels.empty()) throw InvalidArgument("--quotas-per-class requires --labels");
      if (mode == "stratified" && !*q_opt) throw InvalidArgument("stratified mode requires --quotas-per-class");
      if (!*k_opt && !*q_opt) throw InvalidArgument("either --k or --quotas-per-class is required");
      std::vector<Index> prefix;
      if (!sel_prefix.empty()) prefix = io::read_indices(sel_prefix);

      stage = "objective";
      Built built = build_objective(sel_obj, raw);
      SetObjective& obj = *built.objective;

      stage = "select";
      const auto constraint = *q_opt ? optimizer::Constraint::partition(labels, uniform_quotas(labels, quota))
                                     : optimizer::Constraint::cardinality(k);
      const auto t0 = std::chrono::steady_clock::now();
      optimizer::SelectionResult r;
      if (mode == "max") {
        r = optimizer::greedy_max(obj, constraint, {!eager, true});
      } else if (mode == "min") {
        r = optimizer::heuristic_greedy_min(obj, constraint, prefix);
      } else if (mode == "stochastic") {
        if (*q_opt) throw InvalidArgument("stochastic mode supports only a cardinality constraint");
        r = optimizer::stochastic_greedy(obj, k, epsilon, seed);
      } else {
        std::vector<Index> order;
        if (mode == "random") {
          if (*q_opt) throw InvalidArgument("random mode takes --k; use stratified for per-class quotas");
          order = optimizer::random_subset(n, k, seed);
        } else {
          order = optimizer::stratified_random(labels, uniform_quotas(labels, quota), seed);
        }
        obj.reset();
        r.algorithm = mode;
        r.initial_value = obj.value();
        for (Index s : order) {
          r.gains.push_back(obj.gain(s));
          ++r.evaluations;
          obj.commit(s);
          r.order.push_back(s);
        }
        r.final_value = obj.value();
      }
      const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

      stage = "write";
      json config = {{"mode", mode},
                     {"algorithm", r.algorithm},
                     {"seed", seed},
                     {"data", sel_data},
                     {"n", n},
                     {"m", raw.cols()},
                     {"evaluations", r.evaluations},
                     {"threads", omp_get_max_threads()}};
      if (*k_opt) config["k"] = k;
      if (*q_opt) config["quotas_per_class"] = quota;
      if (mode == "stochastic") config["epsilon"] = epsilon;
      if (mode == "max") config["lazy"] = !eager;
      if (!prefix.empty()) config["prefix"] = prefix;
      json doc = {{"order", r.order},
                  {"gains", r.gains},
                  {"final_value", r.final_value},
                  {"objective", built.description},
                  {"config", config},
                  {"wall_seconds", wall}};
      write_json(doc, sel_out);
      return ok;
    }

    if (*score) {
      stage = "load";
      const DesignMatrix raw = io::read_design(sc_data);
      std::vector<Index> subset = io::read_indices(sc_subset);
      std::set<Index> seen;
      for (Index s : subset) {
        if (s >= static_cast<Index>(raw.rows())) {
          throw InvalidArgument("subset index " + std::to_string(s) + " out of range");
        }
        if (!seen.insert(s).second) throw InvalidArgument("duplicate subset index " + std::to_string(s));
      }
      std::sort(subset.begin(), subset.end());

      stage = "objective";
      Built built = build_objective(sc_obj, raw);
      stage = "score";
      const double value = built.objective->evaluate(subset);
      json doc = {{"value", value}, {"size", subset.size()}, {"objective", built.description}};
      if (auto* spec = dynamic_cast<objectives::SpectralObjective*>(built.objective.get())) {
        const Vector& e = spec->state().eigvals();
        json summary = {{"rank", spec->state().rank()},
                        {"dim", spec->state().dim()},
                        {"trace", e.sum()},
                        {"lambda_min", e.size() ? e.minCoeff() : 0.0},
                        {"lambda_max", e.size() ? e.maxCoeff() : 0.0}};
        doc["per_eigenvalue_summary"] = summary;
        doc["vendi"] = {{"q", vendi_q},
                         {"scaling", "unit_trace"},
                         {"score", objectives::vendi_score(e, vendi_q, objectives::VendiScaling::unit_trace)}};
      }
      write_json(doc, sc_out);
      return ok;
    }

    if (*bench) {
      stage = "bench";
      const auto cells = app::run_bench(bc);
      std::cout << std::left << std::setw(8) << "n" << std::setw(8) << "m" << std::setw(8) << "k_frac"
                << std::setw(6) << "k" << std::setw(14) << "oracle_s" << std::setw(14) << "secular_s"
                << std::setw(12) << "speedup" << "identical\n";
      json report = json::array();
      bool all_same = true;
      for (const auto& c : cells) {
        std::cout << std::left << std::setw(8) << c.n << std::setw(8) << c.m << std::setw(8) << c.k_frac
                  << std::setw(6) << c.k << std::setw(14) << c.oracle_seconds << std::setw(14)
                  << c.secular_seconds << std::setw(12) << c.speedup << (c.identical ? "yes" : "NO") << "\n";
        report.push_back({{"n", c.n},
                          {"m", c.m},
                          {"k_frac", c.k_frac},
                          {"k", c.k},
                          {"oracle_seconds", c.oracle_seconds},
                          {"secular_seconds", c.secular_seconds},
                          {"speedup", c.speedup},
                          {"identical", c.identical},
                          {"order", c.secular_order}});
        all_same = all_same && c.identical;
      }
      if (!bench_out.empty()) {
        write_json({{"cells", report}, {"repeats", bc.repeats}, {"seed", bc.seed}, {"objective", bench_objective}},
                   bench_out);
      }
      if (!all_same) {
        std::cerr << "error (bench): oracle and secular selections differ\n";
        return mismatch;
      }
      return ok;
    }

    stage = "verify";
    const auto items = app::run_verification(verify_seed);
    int failed = 0;
    for (const auto& it : items) {
      std::cout << (it.passed ? "PASS  " : "FAIL  ") << it.name << "  [" << it.detail << "]\n";
      failed += it.passed ? 0 : 1;
    }
    if (failed > 0) {
      std::cout << failed << " item(s) failed:\n";
      for (const auto& it : items) {
        if (!it.passed) std::cout << "  " << it.name << "\n";
      }
      return verify_failed;
    }
    std::cout << "all " << items.size() << " items passed\n";
    return ok;
  });
}
